"""The generalized digamma function psi_1 (half the derivative of Deninger's R).

Fast mode shifts ``z`` upward with ``psi1(z) = psi1(z+1) - log(z)/z`` until
``|z|`` reaches the switch radius and then sums the large-``z`` expansion
at optimal truncation.  Reference mode sums the defining series directly with
an Euler-Maclaurin tail; it is slow but independent of the expansion.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from ..errors import DomainError
from ..numerics.bernoulli import DEFAULT_CAP, bernoulli_float
from .asymptotic import AsymptoticSeries, TruncatedSum
from .constants import stieltjes

SWITCH_RADIUS = 20.0


@lru_cache(maxsize=None)
def _harmonic(n: int) -> float:
    return math.fsum(1.0 / j for j in range(1, n + 1))


def _leading(z: complex) -> complex:
    lz = cmath.log(z)
    return 0.5 * lz * lz - lz / (2 * z)


def _term(z: complex, k: int) -> complex:
    two_k = 2 * k
    return bernoulli_float(two_k) / (two_k * z**two_k) * (
        _harmonic(two_k - 2) + 1.0 / (two_k - 1) - cmath.log(z))


PSI1_SERIES = AsymptoticSeries(_leading, _term, math.pi, DEFAULT_CAP // 2)


def _check(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("argument must be finite")
    if z.imag == 0 and z.real <= 0:
        raise DomainError("psi_1 is not defined on the non-positive real axis")
    return z


def _csum(parts) -> complex:
    parts = list(parts)
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


def _fast_upper(z: complex, radius: float) -> complex:
    n = 0
    if z.real < 0:
        n = math.ceil(-z.real)
    while abs(z + n) < radius:
        n += 1
    w = z + n
    shift = [-cmath.log(z + j) / (z + j) for j in range(n)]
    return _csum([PSI1_SERIES.evaluate(w)] + shift)


def _clog1p(w: complex) -> complex:
    """log(1 + w) without the rounding of forming 1 + w."""
    re = 0.5 * math.log1p(2 * w.real + w.real * w.real + w.imag * w.imag)
    return complex(re, math.atan2(w.imag, 1 + w.real))


def _reference_upper(z: complex, n_cut: int | None) -> complex:
    big = n_cut or int(2 * abs(z)) + 40
    g1 = stieltjes(1)
    parts = [complex(-g1), -cmath.log(z) / z]
    for n in range(1, big):
        parts.append(-(cmath.log(n + z) / (n + z) - math.log(n) / n))
    # tail sum_{n>=N} (g(n+z) - g(n)), g(u) = log(u)/u, by Euler-Maclaurin
    u1, u0 = big + z, complex(big)
    l1, l0 = cmath.log(u1), cmath.log(u0)
    tail = [-0.5 * _clog1p(z / big) * (l1 + l0), 0.5 * (l1 / u1 - l0 / u0)]
    for k in range(1, 16):
        m = 2 * k - 1
        hm = _harmonic(m)
        fact = math.factorial(m)
        # g^(m)(u) = (-1)^m m! u^(-m-1) (log u - H_m)
        d1 = -fact * u1 ** (-m - 1) * (l1 - hm)
        d0 = -fact * u0 ** (-m - 1) * (l0 - hm)
        tail.append(-bernoulli_float(2 * k) / math.factorial(2 * k) * (d1 - d0))
    parts.extend(-t for t in tail)
    return _csum(parts)


def psi1(z, mode: str = "fast", radius: float = SWITCH_RADIUS, n_cut: int | None = None) -> complex:
    """psi_1(z) off the non-positive real axis.

    ``mode`` is ``"fast"`` (recurrence plus expansion) or ``"reference"``
    (defining series).  Values for ``Im z < 0`` are conjugates of the
    upper-half-plane values, so ``psi1(conj z) == conj(psi1(z))`` exactly.
    """
    z = _check(z)
    if mode == "fast":
        fn = lambda w: _fast_upper(w, radius)  # noqa: E731
    elif mode == "reference":
        fn = lambda w: _reference_upper(w, n_cut)  # noqa: E731
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if z.imag < 0:
        return fn(z.conjugate()).conjugate()
    return fn(z)


def psi1_asymptotic(z, K: int) -> TruncatedSum:
    """Expansion through k = K with the first omitted term as error proxy.

    ``past_optimal`` is set when K exceeds the optimal truncation index.
    """
    z = _check(z)
    if abs(z) < 2:
        raise DomainError("the expansion is only offered for |z| >= 2")
    return PSI1_SERIES.partial_sum(z, K)


def psi1_optimal_index(z) -> int:
    return PSI1_SERIES.optimal_index(_check(z))
