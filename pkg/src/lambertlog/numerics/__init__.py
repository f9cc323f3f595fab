"""Arithmetic, summation and quadrature primitives."""

from .bernoulli import bernoulli, bernoulli_float
from .doubleword import ExtendedValue, extended_product, extended_sum, two_prod, two_sum
from .quadrature import integrate_adaptive, integrate_oscillatory
from .summation import SumResult, compensated_sum
from .types import QuadratureResult, Tolerance

__all__ = [
    "ExtendedValue", "QuadratureResult", "SumResult", "Tolerance",
    "bernoulli", "bernoulli_float", "compensated_sum", "extended_product",
    "extended_sum", "integrate_adaptive", "integrate_oscillatory", "two_prod", "two_sum",
]
