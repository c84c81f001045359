"""
Exception hierarchy shared by every framekit module.
"""


class FramekitError(Exception):
    """Base class for all framekit errors."""


class InvalidInput(FramekitError):
    """Malformed, non-finite or out-of-range input."""


class InvalidFamily(InvalidInput):
    """A family violates its structural invariants (e.g. a zero column)."""


class DimMismatch(InvalidInput):
    """Vector or coefficient length does not match the family."""


class SingularOperator(FramekitError):
    """An operator function is undefined on a retained eigenvalue."""


class NotLowerSemiFrame(FramekitError):
    """The family does not satisfy the lower frame condition at this truncation."""


class ProjectsOntoSpan(FramekitError):
    """A reconstruction could only recover the projection onto the span."""


class NumericalFailure(FramekitError):
    """A residual exceeded its tolerance."""
