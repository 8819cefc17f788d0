"""AWGN channel with exact Eb/N0 calibration.

Noise generation uses the counter-based Philox generator so that streams
can be split per Monte Carlo trial: results are identical for a given
(seed, stream) pair no matter how trials are scheduled across workers.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .shaping import WaveformBuffer


def noise_sigma(ebn0_db: float, bits_per_symbol: int, code_rate: float, n_up: int) -> float:
    """Per-dimension noise standard deviation for a target Eb/N0.

    sigma^2 = n_up / (2 * r * log2(M) * 10^(EbN0/10)), valid for unit
    average symbol energy, unit-energy pulse taps, and a transmit waveform
    scaled to unit mean sample power (the sqrt(n_up) gain applied by the
    simulation chain).  Doubling n_up doubles the noise power the wider
    sampling bandwidth admits.
    """
    if bits_per_symbol <= 0 or code_rate <= 0 or n_up <= 0:
        raise ConfigurationError("bits_per_symbol, code_rate and n_up must be positive")
    ebn0 = 10.0 ** (ebn0_db / 10.0)
    return float(np.sqrt(n_up / (2.0 * code_rate * bits_per_symbol * ebn0)))


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for an independent (seed, stream) pair."""
    return np.random.Generator(np.random.Philox(key=(int(seed), int(stream))))


def add_awgn(
    buffer: WaveformBuffer, sigma: float, seed: int, stream: int = 0
) -> WaveformBuffer:
    """Add zero-mean complex Gaussian noise, variance sigma^2 per dimension.

    Deterministic for a given (seed, stream); sigma = 0 returns the input
    samples unchanged.
    """
    if sigma < 0:
        raise ConfigurationError("sigma must be non-negative")
    if sigma == 0:
        return buffer
    x = np.asarray(buffer.samples, dtype=np.complex128)
    g = rng_for(seed, stream)
    noise = g.standard_normal(2 * x.size).reshape(-1, 2)
    noise = sigma * (noise[:, 0] + 1j * noise[:, 1])
    return WaveformBuffer(x + noise.reshape(x.shape), buffer.sample_rate_hz, buffer.n_up)
