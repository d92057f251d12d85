"""Exception hierarchy.

Validation problems derive from :class:`ValueError`; numerical failures
derive from :class:`NumericalError`. The CLI maps the first family to exit
code 1 and the second to exit code 2.
"""

from __future__ import annotations


class BesselViscoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BesselViscoError, ValueError):
    """An argument lies outside the domain of the function."""


class InsufficientDataError(BesselViscoError, ValueError):
    """A coefficient sequence or jet is too short for the requested operation."""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


class NumericalError(BesselViscoError, ArithmeticError):
    """A numerical procedure failed to deliver a trustworthy result."""


class SeriesNonConvergenceError(NumericalError):
    def __init__(self, message: str, partial_sum, terms_used: int):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms_used = terms_used


class ZeroRefinementError(NumericalError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class ZeroAuditError(NumericalError):
    pass


class ZeroCapExceededError(NumericalError):
    pass


class PoleProximityError(NumericalError):
    pass


class InversionError(NumericalError):
    def __init__(self, message: str, node: int):
        super().__init__(message)
        self.node = node


class IllConditionedError(NumericalError):
    pass


class OrderEstimationError(NumericalError, ValueError):
    """Order/type estimator cannot run on the given coefficients."""
