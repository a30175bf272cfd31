"""Exception hierarchy shared by all modules."""


class LZerosError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LZerosError, ValueError):
    """Argument outside the region where the quantity is defined (e.g. Re(s) <= 1)."""


class PrecisionError(LZerosError, ArithmeticError):
    """A tail bound is divergent or exceeds the requested tolerance."""


class ValidationError(LZerosError, ValueError):
    """Inconsistent user-supplied data (character tables, configurations)."""


class InvariantViolation(LZerosError, RuntimeError):
    """A structural invariant the construction relies on failed numerically."""


class PartitionError(InvariantViolation):
    """Prime prefix sums cannot be bracketed into the required windows."""

    def __init__(self, message, prime=None):
        super().__init__(message)
        self.prime = prime


class FormulaMismatchError(InvariantViolation):
    """Closed-form and finite-difference evaluations disagree."""


class BoundaryZeroError(LZerosError, ArithmeticError):
    """|F| is too small on a contour to trust its winding number."""


class NonConvergenceError(LZerosError, ArithmeticError):
    """An iterative refinement exceeded its depth or iteration limit."""
