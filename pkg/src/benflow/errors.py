"""Exception types shared across benflow modules."""


class BenflowError(Exception):
    """Base class for all benflow-specific errors."""


class DomainError(BenflowError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UsageError(BenflowError, ValueError):
    """An operation was called in a way that violates its contract."""


class MixedBasisError(UsageError):
    """Exact values from different symbol bases were combined."""


class RepresentationError(BenflowError, ValueError):
    """A quantity cannot be expressed exactly over the declared symbols.

    Callers hitting this should fall back to the floating-point
    relation scan, which is advisory rather than exact.
    """


class UnsupportedStructureError(BenflowError, ValueError):
    """The spectral structure (defective or clustered modes) is not supported."""


class SignalOverflowError(BenflowError, OverflowError):
    """Evaluating a flow signal exceeded the floating-point range."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class NumericalError(BenflowError, RuntimeError):
    """An underlying numerical routine failed to converge."""
