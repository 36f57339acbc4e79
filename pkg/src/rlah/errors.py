"""Exception hierarchy shared by all rlah modules."""


class RLahError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(RLahError):
    """An argument is outside the domain of the requested operation."""


class InadmissibleParameters(RLahError):
    """The triple (n, k, r) does not define an r-Lah distribution."""


class CapacityExceeded(RLahError):
    """The request exceeds a configured size guard (n_max, enumeration cap, ...)."""


class DomainError(RLahError):
    """A real-analysis function was evaluated outside its domain."""


class DegenerateSample(RLahError):
    """A randomly generated instance violates the genericity assumptions."""
