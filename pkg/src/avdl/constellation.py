"""Constellation construction, bit mapping, and hard/soft demapping.

Supported constellations: coherent 8-PSK, differential 8-PSK (D8PSK),
square/cross QAM (16/32/64/256) and DVB-S2(-X style) APSK (16/32/64/256).

Conventions used throughout:

- every constellation is normalised to unit average symbol energy;
- bit groups map MSB-first onto label values;
- hard decisions break distance ties toward the lowest point index;
- LLRs are max-log with the sign convention "positive means bit 0".

APSK point tables and the D8PSK phase-change table are loaded from the
plain-text data files bundled under ``avdl/data``; the library refuses to
build those constellations if a table is missing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DataFileError

_SUPPORTED = {
    ("PSK", 8),
    ("D8PSK", 8),
    ("QAM", 16),
    ("QAM", 32),
    ("QAM", 64),
    ("QAM", 256),
    ("APSK", 16),
    ("APSK", 32),
    ("APSK", 64),
    ("APSK", 256),
}


@dataclass(frozen=True)
class ConstellationSpec:
    """An ordered set of complex points plus their bit labels.

    ``labels[i]`` is the integer value of the log2(M)-bit word assigned to
    ``points[i]`` (MSB first).  ``rings[i]`` is the concentric-ring index of
    point ``i`` (all zero for PSK/QAM grids, informative for APSK).
    """

    scheme: str
    order: int
    points: np.ndarray
    labels: np.ndarray
    rings: np.ndarray

    @property
    def bits_per_symbol(self) -> int:
        return int(np.log2(self.order))

    def label_to_index(self) -> np.ndarray:
        """Inverse permutation: bit-word value -> point index."""
        inv = np.empty(self.order, dtype=np.int64)
        inv[self.labels] = np.arange(self.order)
        return inv


@dataclass
class DifferentialState:
    """Accumulated reference phase for streaming D8PSK encoding."""

    current_phase: float = 0.0

    def advance(self, delta: float) -> float:
        self.current_phase = float(np.mod(self.current_phase + delta, 2 * np.pi))
        return self.current_phase


def _data_path(name: str) -> Path:
    return Path(str(resources.files("avdl").joinpath("data", name)))


def _gray(n: int) -> np.ndarray:
    k = np.arange(n)
    return k ^ (k >> 1)


def _normalise(points: np.ndarray) -> np.ndarray:
    return points / np.sqrt(np.mean(np.abs(points) ** 2))


def load_constellation_table(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parse a constellation data file.

    Row format (whitespace separated):
    ``index  bit-label(binary)  ring  magnitude  phase_rad``.
    Returns (points, labels, rings) ordered by index.
    """
    if not path.exists():
        raise DataFileError(f"constellation table not found: {path}")
    rows = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        idx, label, ring, mag, phase = line.split()
        rows.append((int(idx), int(label, 2), int(ring), float(mag), float(phase)))
    if not rows:
        raise DataFileError(f"constellation table empty: {path}")
    rows.sort()
    if [r[0] for r in rows] != list(range(len(rows))):
        raise DataFileError(f"constellation table has gaps in indices: {path}")
    labels = np.array([r[1] for r in rows], dtype=np.int64)
    rings = np.array([r[2] for r in rows], dtype=np.int64)
    points = np.array([r[3] * np.exp(1j * r[4]) for r in rows], dtype=np.complex128)
    return points, labels, rings


def load_phase_table(path: Path) -> np.ndarray:
    """Parse the D8PSK phase-change table.

    Returns an array ``steps`` of length 8 where tribit value ``t`` encodes a
    phase change of ``steps[t] * pi/4``.
    """
    if not path.exists():
        raise DataFileError(f"phase table not found: {path}")
    steps = np.full(8, -1, dtype=np.int64)
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, k = line.split()
        steps[int(label, 2)] = int(k)
    if sorted(steps.tolist()) != list(range(8)):
        raise DataFileError(f"phase table is not a permutation of 0..7: {path}")
    return steps


def _build_psk8() -> ConstellationSpec:
    angles = np.arange(8) * (np.pi / 4)
    points = np.exp(1j * angles)
    # Gray labels around the circle keep adjacent symbol errors at one bit.
    labels = _gray(8)
    return ConstellationSpec("PSK", 8, points, labels.astype(np.int64), np.zeros(8, np.int64))


def _build_d8psk() -> ConstellationSpec:
    spec = _build_psk8()
    return ConstellationSpec("D8PSK", 8, spec.points, spec.labels, spec.rings)


def _square_qam(order: int) -> ConstellationSpec:
    side = int(np.sqrt(order))
    nbits = int(np.log2(side))
    levels = 2 * np.arange(side) - side + 1
    gray = _gray(side)
    points = np.empty(order, dtype=np.complex128)
    labels = np.empty(order, dtype=np.int64)
    for i in range(side):
        for q in range(side):
            idx = i * side + q
            points[idx] = levels[i] + 1j * levels[q]
            labels[idx] = (int(gray[i]) << nbits) | int(gray[q])
    return ConstellationSpec(
        "QAM", order, _normalise(points), labels, np.zeros(order, np.int64)
    )


# Cross-32 labeling: quasi-Gray assignment found by pairwise label switching
# on the 6x6-minus-corners grid (points enumerated column-major, x then y).
_CROSS32_LABELS = (
    6, 7, 3, 2, 14, 30, 22, 18, 26, 10, 15, 31, 23, 19, 27, 11,
    13, 29, 21, 17, 25, 9, 28, 20, 5, 1, 24, 8, 12, 4, 0, 16,
)


def _cross_qam32() -> ConstellationSpec:
    levels = np.array([-5, -3, -1, 1, 3, 5], dtype=float)
    pts = []
    for x in levels:
        for y in levels:
            if abs(x) == 5 and abs(y) == 5:
                continue
            pts.append(x + 1j * y)
    points = np.array(pts, dtype=np.complex128)
    if _CROSS32_LABELS is None:
        raise ConfigurationError("cross-32 label table missing")
    labels = np.array(_CROSS32_LABELS, dtype=np.int64)
    return ConstellationSpec("QAM", 32, _normalise(points), labels, np.zeros(32, np.int64))


def _apsk(order: int) -> ConstellationSpec:
    path = _data_path(f"apsk_{order}_r34.txt")
    points, labels, rings = load_constellation_table(path)
    if len(points) != order:
        raise DataFileError(f"expected {order} points in {path}, found {len(points)}")
    return ConstellationSpec("APSK", order, _normalise(points), labels, rings)


def build_constellation(scheme: str, order: int) -> ConstellationSpec:
    """Build a unit-energy constellation for the given scheme and order."""
    key = (scheme.upper(), int(order))
    if key not in _SUPPORTED:
        supported = sorted(f"{s}/{m}" for s, m in _SUPPORTED)
        raise ConfigurationError(
            f"unsupported constellation {scheme}/{order}; supported: {', '.join(supported)}"
        )
    scheme, order = key
    if scheme == "PSK":
        return _build_psk8()
    if scheme == "D8PSK":
        return _build_d8psk()
    if scheme == "QAM":
        return _square_qam(order) if order != 32 else _cross_qam32()
    return _apsk(order)


def bits_to_words(bits: np.ndarray, width: int) -> np.ndarray:
    """Group a bit vector into MSB-first integer words of ``width`` bits."""
    bits = np.asarray(bits, dtype=np.int64).reshape(-1)
    if bits.size % width:
        raise ConfigurationError(
            f"bit count {bits.size} is not a multiple of {width}"
        )
    weights = 1 << np.arange(width - 1, -1, -1)
    return bits.reshape(-1, width) @ weights


def words_to_bits(words: np.ndarray, width: int) -> np.ndarray:
    """Expand integer words back into an MSB-first bit vector."""
    words = np.asarray(words, dtype=np.int64).reshape(-1, 1)
    shifts = np.arange(width - 1, -1, -1)
    return ((words >> shifts) & 1).reshape(-1).astype(np.uint8)


def map_bits(spec: ConstellationSpec, bits: np.ndarray) -> np.ndarray:
    """Map a bit vector onto constellation symbols (MSB-first groups)."""
    words = bits_to_words(bits, spec.bits_per_symbol)
    return spec.points[spec.label_to_index()[words]]


def demap_hard(spec: ConstellationSpec, samples: np.ndarray) -> np.ndarray:
    """Minimum-distance hard decisions; ties go to the lowest point index."""
    samples = np.asarray(samples, dtype=np.complex128).reshape(-1)
    d = np.abs(samples[:, None] - spec.points[None, :]) ** 2
    idx = np.argmin(d, axis=1)
    return words_to_bits(spec.labels[idx], spec.bits_per_symbol)


def demap_llr(
    spec: ConstellationSpec, samples: np.ndarray, noise_variance: float
) -> np.ndarray:
    """Max-log LLRs per bit, MSB first within each symbol.

    ``noise_variance`` is the total complex-noise variance per sample,
    i.e. twice the per-dimension variance.  Positive LLR means bit 0 is
    more likely.
    """
    if noise_variance <= 0:
        raise ConfigurationError("noise_variance must be positive")
    samples = np.asarray(samples, dtype=np.complex128).reshape(-1)
    k = spec.bits_per_symbol
    d = np.abs(samples[:, None] - spec.points[None, :]) ** 2
    llr = np.empty((samples.size, k))
    for b in range(k):
        bit = (spec.labels >> (k - 1 - b)) & 1
        d0 = d[:, bit == 0].min(axis=1)
        d1 = d[:, bit == 1].min(axis=1)
        llr[:, b] = (d1 - d0) / noise_variance
    return llr.reshape(-1)


_PHASE_STEPS: np.ndarray | None = None


def d8psk_phase_steps() -> np.ndarray:
    """Tribit value -> phase change in units of pi/4 (from the data file)."""
    global _PHASE_STEPS
    if _PHASE_STEPS is None:
        _PHASE_STEPS = load_phase_table(_data_path("d8psk_phase_table.txt"))
    return _PHASE_STEPS


def d8psk_encode(tribits: np.ndarray, initial_phase: float = 0.0) -> np.ndarray:
    """Differentially encode tribit values (0..7) into unit-magnitude symbols.

    Emits one symbol per tribit; ``initial_phase`` is the implicit reference
    (the phase of the symbol preceding the first emitted one).
    """
    tribits = np.asarray(tribits, dtype=np.int64).reshape(-1)
    if np.any((tribits < 0) | (tribits > 7)):
        raise ConfigurationError("tribit values must be in 0..7")
    steps = d8psk_phase_steps()[tribits]
    phases = initial_phase + np.cumsum(steps) * (np.pi / 4)
    return np.exp(1j * np.mod(phases, 2 * np.pi))


def d8psk_decode(symbols: np.ndarray, reference: complex | None = None) -> np.ndarray:
    """Recover tribits from phase changes between consecutive symbols.

    Without ``reference`` the output has ``len(symbols) - 1`` tribits and is
    invariant to any common phase rotation of the stream.  Passing the
    symbol that preceded ``symbols[0]`` (for example the last ramp-up symbol
    of a burst) recovers all ``len(symbols)`` tribits.
    """
    symbols = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    if reference is not None:
        symbols = np.concatenate(([reference], symbols))
    if symbols.size < 2:
        raise ConfigurationError("need at least 2 symbols to decode phase changes")
    delta = np.angle(symbols[1:] * np.conj(symbols[:-1]))
    k = np.mod(np.rint(delta / (np.pi / 4)), 8).astype(np.int64)
    steps = d8psk_phase_steps()
    inverse = np.empty(8, dtype=np.int64)
    inverse[steps] = np.arange(8)
    return inverse[k]


def tribits_to_bits(tribits: np.ndarray) -> np.ndarray:
    return words_to_bits(np.asarray(tribits, dtype=np.int64), 3)


def bits_to_tribits(bits: np.ndarray) -> np.ndarray:
    return bits_to_words(bits, 3)
