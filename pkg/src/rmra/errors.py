"""Exception types shared across the toolkit."""


class RmraError(Exception):
    """Base class for all toolkit errors."""


class InvalidArray(RmraError):
    """Input cannot be turned into a valid sensor array."""


class UnknownSensor(RmraError):
    """Referenced sensor position is not part of the array."""


class ApertureTooSmall(RmraError):
    """Operation needs a larger aperture than the array provides."""


class EndpointFailureUndefined(RmraError):
    """Failure analysis is only defined for interior sensors."""


class TooSmall(RmraError):
    """Array has too few sensors for the requested analysis."""


class DomainError(RmraError):
    """Argument outside the operation's domain."""


class RankError(RmraError):
    """Combination rank outside [0, C(m, k))."""


class BelowMinimumSize(RmraError):
    """Closed-form family is undefined below eight sensors."""


class ConfigError(RmraError):
    """Search configuration violates its invariants."""


class RejectedRecord(RmraError):
    """Catalog insert refused because the array failed re-validation."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report
