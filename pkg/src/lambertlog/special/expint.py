"""Shi, Chi, Ei and the kernel sinh(w)Shi(w) - cosh(w)Chi(w).

The kernel ``f(w) = sinh(w)Shi(w) - cosh(w)Chi(w)`` equals
``int_0^inf t cos(t)/(t^2 + w^2) dt`` for ``Re w > 0``.  Writing it as a
direct combination of Shi and Chi loses about ``2|w|/ln 10`` digits, so it is
evaluated by one of three routes:

* real ``w <= 15``: the Taylor series in double-word arithmetic;
* ``Re w >= 40``: the asymptotic series ``-sum_{j odd} j! w^(-j-1)`` at
  optimal truncation;
* otherwise: rotating the cosine into decaying exponentials gives
  ``f(w) = int_0^inf u e^(-u)/(u^2 - w^2) du - (i pi/2) e^(-w)`` for
  ``Im w >= 0``; the u-integral is taken along the ray ``arg u = -pi/4``,
  away from the poles at ``u = +-w``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import BudgetError, DomainError
from ..numerics.doubleword import ExtendedValue, dw_exp, dw_log
from ..numerics.quadrature import integrate_adaptive
from ..numerics.types import Tolerance
from .constants import EULER_GAMMA, euler_gamma_dw

SHI_CHI_RADIUS = 40.0
DIRECT_LIMIT = 15.0
ASYMPTOTIC_LIMIT = 40.0
_RAY = cmath.exp(-0.25j * math.pi)


def shi_chi(z) -> tuple[complex, complex]:
    """(Shi(z), Chi(z)) by their Taylor series, for ``|z| <= 40``.

    Chi uses the principal logarithm and is undefined on the non-positive
    real axis.  Off the real axis the series cancel, losing roughly
    ``|z|/ln 10`` digits.
    """
    z = complex(z)
    if abs(z) > SHI_CHI_RADIUS:
        raise BudgetError("Taylor evaluation of Shi/Chi is limited to |z| <= 40; "
                          "use sinhshi_minus_coshchi for the combined kernel")
    if z.imag == 0 and z.real <= 0:
        if z == 0:
            return 0j, complex(-math.inf)
        raise DomainError("Chi is undefined on the non-positive real axis")
    shi_terms = []
    chi_terms = []
    t = z  # z^(2k+1)/(2k+1)!
    peak = 0.0
    k = 0
    while True:
        shi_terms.append(t / (2 * k + 1))
        t2 = t * z / (2 * k + 2)  # z^(2k+2)/(2k+2)!
        chi_terms.append(t2 / (2 * k + 2))
        t = t2 * z / (2 * k + 3)
        peak = max(peak, abs(t2))
        k += 1
        if t == 0 or (abs(t) < 1e-18 * peak and k > abs(z)):
            break
    shi = complex(math.fsum(v.real for v in shi_terms), math.fsum(v.imag for v in shi_terms))
    chi_series = complex(math.fsum(v.real for v in chi_terms), math.fsum(v.imag for v in chi_terms))
    return shi, EULER_GAMMA + cmath.log(z) + chi_series


def _kernel_taylor_dw(w: float) -> ExtendedValue:
    """sinh(w)Shi(w) - cosh(w)Chi(w) for real 0 < w <= 15 in double-word."""
    x = ExtendedValue(w)
    term = x  # w^(2k+1)/(2k+1)!
    shi = ExtendedValue(0.0)
    chi = ExtendedValue(0.0)
    k = 0
    while True:
        shi = shi + term / (2 * k + 1)
        even = term * x / (2 * k + 2)
        chi = chi + even / (2 * k + 2)
        term = even * x / (2 * k + 3)
        k += 1
        if abs(term.hi) < 1e-40 and k > 3:
            break
    chi = chi + euler_gamma_dw() + dw_log(x)
    ep = dw_exp(x)
    em = dw_exp(-x)
    sinh = (ep - em) * 0.5
    cosh = (ep + em) * 0.5
    return sinh * shi - cosh * chi


def _kernel_asymptotic(w: complex) -> complex:
    """-sum_{j odd} j! w^(-j-1) at optimal truncation, plus the Stokes term."""
    inv2 = 1 / (w * w)
    term = -inv2  # j = 1
    parts = [term]
    j = 1
    while True:
        nxt = term * (j + 1) * (j + 2) * inv2
        if abs(nxt) >= abs(term) or abs(nxt) < 1e-18 * abs(parts[0]):
            break
        parts.append(nxt)
        term = nxt
        j += 2
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    if w.imag > 0:
        value -= 0.5j * math.pi * cmath.exp(-w)
    elif w.imag < 0:
        value += 0.5j * math.pi * cmath.exp(-w)
    return value


def _kernel_ray(w: complex, tol: Tolerance) -> complex:
    flip = w.imag < 0
    if flip:
        w = w.conjugate()
    w2 = w * w

    def f(t: np.ndarray) -> np.ndarray:
        u = t * _RAY
        return u * np.exp(-u) / (u * u - w2) * _RAY

    scale = min(1.0, abs(w))
    head = integrate_adaptive(f, 0.0, scale, tol)
    rest = integrate_adaptive(f, scale, math.inf, tol, panel=1.0)
    value = head.value + rest.value - 0.5j * math.pi * cmath.exp(-w)
    return value.conjugate() if flip else value


def sinhshi_minus_coshchi(w, tol: Tolerance | None = None) -> complex:
    """``sinh(w)Shi(w) - cosh(w)Chi(w)`` for ``Re w > 0``."""
    w = complex(w)
    if not (w.real > 0):
        raise DomainError("the kernel requires Re(w) > 0")
    if w.imag == 0 and w.real <= DIRECT_LIMIT:
        return complex(float(_kernel_taylor_dw(w.real)))
    if w.real >= ASYMPTOTIC_LIMIT and abs(w.imag) <= w.real:
        return _kernel_asymptotic(w)
    value = _kernel_ray(w, tol or Tolerance(1e-300, 1e-15))
    if w.imag == 0:
        return complex(value.real)
    return value


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - log x - sum (-x)^k/(k k!)
    terms = [-EULER_GAMMA, -math.log(x)]
    t = 1.0
    for k in range(1, 200):
        t *= -x / k
        terms.append(-t / k)
        if abs(t) < 1e-18:
            break
    return math.fsum(terms)


def _e1_continued_fraction(x: float) -> float:
    # modified Lentz on E1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x)


def exp_integral_ei(x: float) -> float:
    """Ei(x) = PV int_{-inf}^x e^t/t dt for real ``x != 0``.

    Positive arguments up to 40 use the power series (all terms positive);
    larger ones the asymptotic series.  Negative arguments use
    ``Ei(x) = -E1(-x)``, with E1 from its series for ``|x| <= 1`` and from a
    continued fraction beyond.
    """
    x = float(x)
    if x == 0:
        raise DomainError("Ei has a logarithmic singularity at 0")
    if x < 0:
        ax = -x
        return -(_e1_series(ax) if ax <= 1.0 else _e1_continued_fraction(ax))
    if x <= 40.0:
        terms = [EULER_GAMMA, math.log(x)]
        t = 1.0
        peak = 0.0
        k = 1
        while True:
            t *= x / k
            terms.append(t / k)
            peak = max(peak, t / k)
            if k > x and t / k < 1e-18 * peak:
                break
            k += 1
        return math.fsum(terms)
    parts = []
    t = 1.0
    k = 0
    while True:
        parts.append(t)
        nxt = t * (k + 1) / x
        if nxt >= t or nxt < 1e-18:
            break
        t = nxt
        k += 1
    return math.exp(x) / x * math.fsum(parts)
