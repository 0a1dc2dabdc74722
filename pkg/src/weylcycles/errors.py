"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so new errors should subclass one of
the three families below rather than ``WeylError`` directly.
"""


class WeylError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(WeylError, ValueError):
    """Input violates an operation's stated precondition."""


class DimensionMismatchError(PreconditionError):
    """Two classes (or vectors) do not live on the same space."""


class InvalidIndexSetError(PreconditionError):
    pass


class InvalidJoinError(PreconditionError):
    pass


class UnsupportedSpaceError(PreconditionError):
    pass


class NotOrthogonalError(PreconditionError):
    pass


class VerificationError(WeylError):
    """A verification step found a mismatch (duality, equivariance...)."""


class InvariantViolationError(VerificationError, AssertionError):
    """An internal consistency check failed; indicates a bug."""


class ResourceCapError(WeylError):
    """A configured size cap (dimension, matrix size) would be exceeded."""
