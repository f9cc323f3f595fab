"""Exception hierarchy shared by every evaluator."""

from __future__ import annotations


class NumericsError(Exception):
    """Base class for failures raised by this package."""


class DomainError(NumericsError, ValueError):
    """Argument outside the region where the function is defined."""


class BudgetError(NumericsError):
    """A configured cap (terms, table size, evaluations) was exceeded."""


class NonConvergenceError(NumericsError):
    """A series or quadrature failed to reach its tolerance.

    ``partial`` carries the best value available when the budget ran out.
    """

    def __init__(self, message: str, partial=None, terms_used: int | None = None):
        super().__init__(message)
        self.partial = partial
        self.terms_used = terms_used


class CancellationError(NumericsError):
    """Required cancellation exceeds the headroom of double-word arithmetic."""

    def __init__(self, message: str, n: int, digits_needed: float, digits_allowed: float):
        super().__init__(message)
        self.n = n
        self.digits_needed = digits_needed
        self.digits_allowed = digits_allowed
