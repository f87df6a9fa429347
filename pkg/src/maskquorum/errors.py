"""Exception hierarchy shared by all maskquorum modules."""


class MaskQuorumError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(MaskQuorumError):
    """An argument violates an operation's precondition or a type invariant."""


class UnsupportedOrderError(ParameterError):
    """A projective-plane order that is not a prime (only prime fields are supported)."""


class SizeError(MaskQuorumError):
    """The instance is too large for the requested exact operation."""


class ApplicabilityError(MaskQuorumError):
    """The operation's validity regime does not cover the given parameters."""


class NumericalError(MaskQuorumError):
    """A numerical routine failed to converge or to bracket a root."""
