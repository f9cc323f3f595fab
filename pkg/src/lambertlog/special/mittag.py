"""1F2 in double-word arithmetic and the Mittag-Leffler function E_{2,b}."""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from ..errors import DomainError, NonConvergenceError
from ..numerics.doubleword import ExtendedValue
from ..numerics.quadrature import integrate_oscillatory
from ..numerics.summation import compensated_sum
from ..numerics.types import Tolerance
from .constants import EULER_GAMMA
from .gamma import log_gamma

_PI2_6 = math.pi**2 / 6


def _is_nonpositive_integer(x) -> bool:
    return x <= 0 and x == math.floor(x)


def hyp1f2(a, b, c, z, tol: Tolerance = Tolerance(1e-300, 1e-32, max_terms=5000)) -> ExtendedValue:
    """``sum_n (a)_n / ((b)_n (c)_n) z^n / n!`` summed in double-word.

    Parameters may be ints, floats or Fractions (converted exactly) and ``z``
    may also be an :class:`ExtendedValue`.  Only real arguments are supported,
    since the result is a real double-word number.
    """
    for name, p in (("a", a), ("b", b), ("c", c)):
        if isinstance(p, complex):
            if p.imag != 0:
                raise DomainError(f"parameter {name} must be real for double-word evaluation")
    if isinstance(z, complex):
        if z.imag != 0:
            raise DomainError("z must be real for double-word evaluation")
        z = z.real
    if _is_nonpositive_integer(b) or _is_nonpositive_integer(c):
        raise DomainError("lower parameter at a pole of the Pochhammer symbol")
    fa, fb, fc = (Fraction(p.real if isinstance(p, complex) else p) for p in (a, b, c))
    zz = ExtendedValue.from_value(z)
    term = ExtendedValue(1.0)
    total = ExtendedValue(1.0)
    quiet = 0
    for n in range(tol.max_terms):
        if fa + n == 0:
            return total
        ratio = ExtendedValue.from_value((fa + n) / ((fb + n) * (fc + n) * (n + 1)))
        term = term * ratio * zz
        total = total + term
        # terms shrink monotonically once n exceeds |z|^(1/2)
        if abs(term.hi) <= tol.target(abs(total.hi)) and (n + 1) ** 2 > abs(zz.hi):
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise NonConvergenceError("1F2 series did not converge within budget",
                              partial=total, terms_used=tol.max_terms)


def _ml_terms(z: complex, b: float):
    t = cmath.exp(-log_gamma(b))  # 1/Gamma(b)
    k = 0
    while True:
        yield t
        t = t * z / ((2 * k + b) * (2 * k + b + 1))
        k += 1


def mittag_leffler_e2b(z, b: float, tol: Tolerance = Tolerance(1e-300, 1e-16)) -> complex:
    """E_{2,b}(z) = sum_k z^k / Gamma(2k + b) for ``b > 0``."""
    if not b > 0:
        raise DomainError("b must be positive")
    z = complex(z)
    return complex(compensated_sum(_ml_terms(z, b), tol).value)


def _d2b_series_terms(w: complex):
    w2 = w * w
    h1 = 0.0
    h2 = 0.0
    t = 1.0 + 0j  # w^(2k)/(2k)!
    k = 0
    while True:
        psi = -EULER_GAMMA + h1
        dpsi = _PI2_6 - h2
        yield (psi * psi - dpsi) * t
        for j in (2 * k + 1, 2 * k + 2):
            h1 += 1.0 / j
            h2 += 1.0 / (j * j)
        t = t * w2 / ((2 * k + 1) * (2 * k + 2))
        k += 1


def ml_d2b_at1(w, mode: str = "series", tol: Tolerance = Tolerance(1e-13, 1e-13)) -> complex:
    """Second b-derivative of E_{2,b}(w^2) at b = 1.

    ``series`` sums ``(psi^2 - psi')(2k+1) w^(2k) / (2k)!``;
    ``integral`` evaluates ``log^2(w) cosh(w) + 2 int_0^inf u cos(u) log(u)/(u^2 + w^2) du``
    with the oscillatory integrator (requires ``Re w > 0``).
    """
    w = complex(w)
    if mode == "series":
        series_tol = Tolerance(1e-300, 1e-16, max_terms=tol.max_terms)
        return complex(compensated_sum(_d2b_series_terms(w), series_tol).value)
    if mode != "integral":
        raise ValueError(f"unknown mode {mode!r}")
    if not w.real > 0:
        raise DomainError("integral mode requires Re(w) > 0")
    w2 = w * w

    def g(u: np.ndarray) -> np.ndarray:
        return u * np.log(u) / (u * u + w2)

    r = integrate_oscillatory(g, tol)
    lw = cmath.log(w)
    return lw * lw * cmath.cosh(w) + 2 * r.value
