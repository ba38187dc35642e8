"""Exception hierarchy shared across the package."""


class NullfreqError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NullfreqError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConfigError(NullfreqError, ValueError):
    """A simulation or CLI configuration is invalid."""


class EstimationError(NullfreqError):
    """Base class for estimation failures."""


class FrequencyNotFoundError(EstimationError):
    """|phi_n| never reaches the target level n^(-gamma) on [0, log n].

    Usually means the data is too concentrated or n is too small for the
    chosen gamma; raising gamma lowers the level and may help.
    """


class DegenerateEstimateError(EstimationError):
    """The variance estimate came out non-positive (pathological small-n data)."""
