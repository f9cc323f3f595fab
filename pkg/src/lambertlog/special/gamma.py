"""log-Gamma, digamma and trigamma for complex arguments.

The argument is shifted upward with the functional recurrences until
``|z| >= 20`` and ``Re z >= 0``; the Stirling-type series is then summed until
its terms drop below rounding level.  Results for ``Im z < 0`` are obtained by
conjugating the upper-half-plane value, so reflection symmetry is exact.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from ..errors import DomainError
from ..numerics.bernoulli import bernoulli, bernoulli_float
from ..numerics.doubleword import PI, ExtendedValue, dw_exp, dw_log

SWITCH_RADIUS = 20.0
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_EPS = 2.220446049250313e-16


def _check_pole(z: complex) -> None:
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise DomainError(f"pole of the gamma function at z = {z.real:g}")


def _shift_count(z: complex, radius: float) -> int:
    n = 0
    if z.real < 0:
        n = math.ceil(-z.real)
    while abs(z + n) < radius:
        n += 1
    return n


def _csum(values) -> complex:
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _upper(fn):
    """Evaluate in the closed upper half-plane and conjugate otherwise."""

    def wrapper(z, *args, **kwargs):
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError("argument must be finite")
        _check_pole(z)
        if z.imag < 0:
            return fn(z.conjugate(), *args, **kwargs).conjugate()
        return fn(z, *args, **kwargs)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_upper
def log_gamma(z: complex, radius: float = SWITCH_RADIUS) -> complex:
    """Analytic continuation of log Gamma from the positive axis (scipy's ``loggamma`` branch)."""
    n = _shift_count(z, radius)
    w = z + n
    inv = 1 / w
    inv2 = inv * inv
    series = []
    p = inv
    for k in range(1, 30):
        t = bernoulli_float(2 * k) / (2 * k * (2 * k - 1)) * p
        series.append(t)
        if abs(t) < _EPS * 1e-3:
            break
        p *= inv2
    head = (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI
    shift = _csum(cmath.log(z + j) for j in range(n))
    return head + _csum(series) - shift


@_upper
def digamma(z: complex, radius: float = SWITCH_RADIUS) -> complex:
    n = _shift_count(z, radius)
    w = z + n
    inv2 = 1 / (w * w)
    terms = [cmath.log(w), -0.5 / w]
    p = inv2
    for k in range(1, 30):
        t = -bernoulli_float(2 * k) / (2 * k) * p
        terms.append(t)
        if abs(t) < _EPS * 1e-3:
            break
        p *= inv2
    terms.extend(-1 / (z + j) for j in range(n))
    return _csum(terms)


@_upper
def trigamma(z: complex, radius: float = SWITCH_RADIUS) -> complex:
    n = _shift_count(z, radius)
    w = z + n
    inv = 1 / w
    inv2 = inv * inv
    terms = [inv, 0.5 * inv2]
    p = inv2 * inv
    for k in range(1, 30):
        t = bernoulli_float(2 * k) * p
        terms.append(t)
        if abs(t) < _EPS * 1e-3:
            break
        p *= inv2
    terms.extend(1 / ((z + j) * (z + j)) for j in range(n))
    return _csum(terms)


def digamma_real(x: float) -> float:
    return digamma(complex(x)).real


def harmonic(n: int) -> float:
    """H_n = sum_{j<=n} 1/j in binary64."""
    return math.fsum(1.0 / j for j in range(1, n + 1))


def gamma_dw(x) -> ExtendedValue:
    """Gamma(x) in double-word for real ``x`` (float or Fraction) off the poles."""
    fx = Fraction(x)
    if fx <= 0 and fx.denominator == 1:
        raise DomainError(f"pole of the gamma function at x = {fx}")
    shift = 0
    while fx + shift < 40:
        shift += 1
    w = fx + shift
    wv = ExtendedValue.from_value(w)
    lw = dw_log(wv)
    series = ExtendedValue(0.0)
    for k in range(1, 16):
        series = series + ExtendedValue.from_value(bernoulli(2 * k) / (2 * k * (2 * k - 1)) / w ** (2 * k - 1))
    log_g = (wv - 0.5) * lw - wv + dw_log(PI * 2) * 0.5 + series
    prod = ExtendedValue(1.0)
    for j in range(shift):
        prod = prod * ExtendedValue.from_value(fx + j)
    return dw_exp(log_g) / prod
