"""Baseband physical-layer simulation of VDL2 and advanced-VDL waveforms.

Subpackages and modules:

- ``constellation``: PSK / D8PSK / QAM / APSK construction, bit mapping,
  hard and soft (LLR) demapping.
- ``fec``: LDPC, convolutional, Reed-Solomon and header block codes.
- ``framing``: VDL2 burst construction and parsing at the tribit level.
- ``shaping``: SRRC and Parks-McClellan pulse-shaping design and use.
- ``channel``: calibrated AWGN with a counter-based, seed-splittable RNG.
- ``metrics``: Monte Carlo BER, PAPR CCDF, PSD, link-margin table.
- ``scfdma``: DFT-spread generation of the same waveforms plus the
  multiplication-count model and timing benchmark.
- ``cli``: scenario-driven command line front end.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    DataFileError,
    InsufficientDataError,
    SimulationError,
)

__all__ = [
    "ConfigurationError",
    "DataFileError",
    "InsufficientDataError",
    "SimulationError",
    "__version__",
]
