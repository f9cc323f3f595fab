from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerance:
    """Accuracy targets plus work budgets for a series or quadrature."""

    abs_tol: float = 1e-14
    rel_tol: float = 1e-14
    max_terms: int = 100_000
    max_evals: int = 2_000_000

    def __post_init__(self) -> None:
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("at least one of abs_tol, rel_tol must be positive")
        if self.max_terms < 1 or self.max_evals < 1:
            raise ValueError("budgets must be positive integers")

    def target(self, scale: float) -> float:
        """Absolute error target for a quantity of magnitude ``scale``."""
        return max(self.abs_tol, self.rel_tol * abs(scale))

    def scaled(self, factor: float) -> "Tolerance":
        return Tolerance(self.abs_tol * factor, self.rel_tol * factor,
                         self.max_terms, self.max_evals)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    err_estimate: float
    n_evals: int
    converged: bool

    def __post_init__(self) -> None:
        v = complex(self.value)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError("quadrature produced a non-finite value")
