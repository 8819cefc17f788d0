"""Pulse-shaping filter design and application.

Two designs are provided: the closed-form square-root raised-cosine used
by VDL2 and an equiripple Parks-McClellan lowpass tuned to be (nearly)
Nyquist when cascaded with itself.  Both carry ``N_up * K + 1`` taps,
linear phase, and unit energy.

Shaping is zero-insertion upsampling followed by full convolution; the
matched filter convolves with the (symmetric) taps again and samples at
the documented group delay of ``(L - 1) / 2`` samples per filter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import remez, upfirdn

from .errors import ConfigurationError, SimulationError


@dataclass(frozen=True)
class FilterDesign:
    """A real, symmetric, unit-energy FIR pulse plus its design metadata."""

    taps: np.ndarray
    kind: str                      # "SRRC" or "PM"
    n_up: int
    span_symbols: int
    roll_off: float | None = None          # SRRC only
    f_pass: float | None = None            # PM only, cycles/sample
    f_stop: float | None = None            # PM only, cycles/sample
    stopband_atten_db: float | None = None  # PM only, measured

    @property
    def n_taps(self) -> int:
        return len(self.taps)

    @property
    def group_delay(self) -> int:
        return (len(self.taps) - 1) // 2


@dataclass(frozen=True)
class WaveformBuffer:
    """Complex baseband samples with rate metadata."""

    samples: np.ndarray
    sample_rate_hz: float
    n_up: int


def _check_common(n_up: int, span: int) -> None:
    if n_up < 2:
        raise ConfigurationError(f"n_up must be >= 2, got {n_up}")
    if span < 2:
        raise ConfigurationError(f"span must be >= 2 symbols, got {span}")


def design_srrc(roll_off: float, n_up: int, span: int) -> FilterDesign:
    """Closed-form square-root raised-cosine taps, unit energy.

    Singular time points (t = 0 and |t| = 1/(4a)) use the analytic limits.
    """
    if not 0 < roll_off <= 1:
        raise ConfigurationError(f"roll-off must be in (0, 1], got {roll_off}")
    _check_common(n_up, span)
    a = float(roll_off)
    n = n_up * span + 1
    t = (np.arange(n) - (n - 1) / 2) / n_up
    h = np.empty(n)
    for i, ti in enumerate(t):
        if abs(ti) < 1e-12:
            h[i] = 1 - a + 4 * a / np.pi
        elif abs(abs(ti) - 1 / (4 * a)) < 1e-12:
            h[i] = (a / np.sqrt(2)) * (
                (1 + 2 / np.pi) * np.sin(np.pi / (4 * a))
                + (1 - 2 / np.pi) * np.cos(np.pi / (4 * a))
            )
        else:
            num = np.sin(np.pi * ti * (1 - a)) + 4 * a * ti * np.cos(np.pi * ti * (1 + a))
            den = np.pi * ti * (1 - (4 * a * ti) ** 2)
            h[i] = num / den
    h /= np.sqrt(np.sum(h * h))
    return FilterDesign(taps=h, kind="SRRC", n_up=n_up, span_symbols=span, roll_off=a)


def measure_stopband_atten(taps: np.ndarray, f_stop: float, nfft: int = 1 << 15) -> float:
    """Worst-case stopband rejection in dB relative to the passband peak."""
    response = np.abs(np.fft.rfft(taps, nfft))
    freqs = np.linspace(0.0, 0.5, len(response))
    stop = response[freqs >= f_stop]
    return float(-20 * np.log10(stop.max() / response.max()))


def design_pm(
    symbol_rate: float,
    n_up: int,
    span: int,
    atten_db: float = 80.0,
    f_pass: float | None = None,
    f_stop: float | None = None,
) -> FilterDesign:
    """Equiripple lowpass via the Parks-McClellan exchange algorithm.

    Band edges default to the Nyquist-property rule: a passband edge of
    ``(R / n_up)`` Hz and a stopband edge 3.4x higher, expressed here in
    cycles/sample at the upsampled rate ``n_up * R`` (so ``1 / n_up**2``
    and ``3.4 / n_up**2``).  Raw cycles/sample overrides are accepted.

    The stopband weight is increased until the measured rejection meets
    ``atten_db``; order 32 already meets 80 dB at the default edges.
    """
    _check_common(n_up, span)
    if atten_db < 40:
        raise ConfigurationError(f"atten_db must be >= 40, got {atten_db}")
    if symbol_rate <= 0:
        raise ConfigurationError("symbol_rate must be positive")
    fp = 1.0 / n_up**2 if f_pass is None else float(f_pass)
    fs = 3.4 * fp if f_stop is None else float(f_stop)
    if not 0 < fp < fs < 0.5:
        raise ConfigurationError(f"invalid band edges: f_pass={fp}, f_stop={fs}")
    n = n_up * span + 1
    weight = 1.0
    taps = None
    measured = -np.inf
    for _ in range(12):
        try:
            taps = remez(n, [0.0, fp, fs, 0.5], [1.0, 0.0], weight=[1.0, weight])
        except Exception as exc:  # exchange failed to converge
            raise SimulationError(
                f"Parks-McClellan exchange failed at weight {weight}: {exc}"
            ) from exc
        measured = measure_stopband_atten(taps, fs)
        if measured >= atten_db:
            break
        weight *= 2.0
    else:
        raise SimulationError(
            f"PM design did not reach {atten_db} dB (best {measured:.1f} dB at order {n - 1})"
        )
    taps = taps / np.sqrt(np.sum(taps * taps))
    return FilterDesign(
        taps=taps,
        kind="PM",
        n_up=n_up,
        span_symbols=span,
        f_pass=fp,
        f_stop=fs,
        stopband_atten_db=measured,
    )


def shape(symbols: np.ndarray, design: FilterDesign, symbol_rate: float = 1.0) -> WaveformBuffer:
    """Zero-insert upsample by ``n_up`` and convolve with the pulse taps.

    Output length is ``len(symbols) * n_up + L - 1`` (full convolution).
    """
    symbols = np.asarray(symbols, dtype=np.complex128).reshape(-1)
    if symbols.size == 0:
        raise ConfigurationError("cannot shape an empty symbol sequence")
    up = np.zeros(symbols.size * design.n_up, dtype=np.complex128)
    up[:: design.n_up] = symbols
    out = np.convolve(up, design.taps)
    return WaveformBuffer(out, sample_rate_hz=symbol_rate * design.n_up, n_up=design.n_up)


def shape_frames(frames: np.ndarray, design: FilterDesign) -> np.ndarray:
    """Shape a (n_frames, n_symbols) matrix row-wise; same length rule."""
    frames = np.asarray(frames, dtype=np.complex128)
    out = upfirdn(design.taps, frames, up=design.n_up, axis=-1)
    want = frames.shape[-1] * design.n_up + design.n_taps - 1
    return out[..., :want]


def matched_filter_downsample(
    buffer: WaveformBuffer, design: FilterDesign, n_symbols: int | None = None
) -> np.ndarray:
    """Convolve with the (symmetric) taps and sample at symbol instants.

    The first estimate is taken at sample ``L - 1`` of the cascade output,
    i.e. the combined group delay of both filters.  With unit-energy taps
    the cascade peak is one, so a clean round trip returns the symbols at
    the filter's ISI floor and pure noise keeps its variance.
    """
    x = np.asarray(buffer.samples, dtype=np.complex128).reshape(-1)
    if x.size < design.n_taps:
        raise ConfigurationError("waveform shorter than one filter span")
    y = np.convolve(x, design.taps)
    start = design.n_taps - 1
    est = y[start :: design.n_up]
    if n_symbols is not None:
        est = est[:n_symbols]
    return est


def edge_symbols(design: FilterDesign) -> int:
    """Symbols at each end whose estimates ride the convolution ramp."""
    return design.span_symbols // 2


def check_nyquist(design: FilterDesign) -> float:
    """Peak ISI ratio of the matched cascade at symbol-spaced lags.

    The cascade ``g = taps (*) taps`` is sampled at multiples of ``n_up``
    around its peak, over the interior lags ``1 .. span/2 - 1``.  The lag
    at exactly half the filter span is excluded: there the truncation
    edges of both cascaded responses coincide and the value reflects the
    rectangular truncation, not the band-edge design.
    """
    g = np.convolve(design.taps, design.taps)
    centre = len(g) // 2
    peak = abs(g[centre])
    lags = range(1, max(design.span_symbols // 2, 2))
    vals = [abs(g[centre + k * design.n_up]) for k in lags]
    vals += [abs(g[centre - k * design.n_up]) for k in lags]
    return float(max(vals) / peak)
