"""Exception types shared across the library.

The CLI maps these onto exit codes: configuration problems exit 2,
simulation failures exit 3, statistically invalid requests exit 4.
"""


class ConfigurationError(ValueError):
    """A parameter combination or scenario file is invalid."""


class DataFileError(ConfigurationError):
    """A bundled data file is missing, malformed, or fails its checksum."""


class SimulationError(RuntimeError):
    """A simulation pipeline failed while running."""


class InsufficientDataError(RuntimeError):
    """A requested statistic cannot be supported by the available data."""
