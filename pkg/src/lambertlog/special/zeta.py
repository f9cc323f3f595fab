"""Riemann zeta and its derivative by Euler-Maclaurin summation.

``zeta_prime`` differentiates the Euler-Maclaurin formula term by term in
``s``; there is no numerical differentiation anywhere.  Both functions accept
scalars, and :func:`zeta_pair_array` evaluates the pair on a numpy array of
arguments (used along the critical line).
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..numerics.bernoulli import bernoulli
from .constants import zeta_prime_even_dw
from .gamma import digamma, log_gamma

_MAX_K = 30
_B2K_OVER_FACT = [float(bernoulli(2 * k)) / math.factorial(2 * k) for k in range(1, _MAX_K + 1)]
_LOG_2PI = math.log(2 * math.pi)


def em_cutoff(s_abs_imag: float, s_abs: float = 0.0) -> int:
    """Direct-sum length: ``max(12, |Im s|/2)`` grown for large ``|s|`` off the line."""
    return int(max(12, math.ceil(s_abs_imag / 2), math.ceil(s_abs / 4)))


def zeta_pair_array(s, n_cut: int | None = None, need_prime: bool = True):
    """Return ``(zeta(s), zeta'(s))`` for a numpy array of ``s`` (no reflection)."""
    s = np.asarray(s, dtype=complex)
    if np.any(s == 1):
        raise DomainError("zeta has a pole at s = 1")
    if n_cut is None:
        n_cut = em_cutoff(float(np.max(np.abs(s.imag))) if s.size else 0.0,
                          float(np.max(np.abs(s))) if s.size else 0.0)
    big_n = float(n_cut)
    n = np.arange(1, n_cut, dtype=float)
    logn = np.log(n)
    powers = np.exp(-np.multiply.outer(s, logn))
    z = powers.sum(axis=-1)
    ln_n = math.log(big_n)
    nps = np.exp(-s * ln_n)
    sm1 = s - 1
    z = z + big_n * nps / sm1 + 0.5 * nps
    if need_prime:
        zp = -(powers * logn).sum(axis=-1)
        zp = zp + big_n * nps * (-ln_n / sm1 - 1 / (sm1 * sm1)) - 0.5 * ln_n * nps
    poch = s.copy()  # (s)_{2k-1}
    dpoch = np.ones_like(s)  # its s-derivative
    base = nps / big_n  # N^{-s-2k+1}
    inv_n2 = 1 / (big_n * big_n)
    scale = np.maximum(np.abs(z), 1e-300)
    for k in range(1, _MAX_K + 1):
        c = _B2K_OVER_FACT[k - 1]
        term = c * poch * base
        z = z + term
        small = np.abs(term) < 1e-18 * scale
        if need_prime:
            dterm = c * base * (dpoch - poch * ln_n)
            zp = zp + dterm
            small &= np.abs(dterm) < 1e-18 * np.maximum(np.abs(zp), 1e-300)
        if np.all(small):
            break
        a, b = s + (2 * k - 1), s + 2 * k
        dpoch = dpoch * a * b + poch * (a + b)
        poch = poch * a * b
        base = base * inv_n2
    return (z, zp) if need_prime else (z, None)


def _chi_and_prime(s: complex) -> tuple[complex, complex]:
    """chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) and its s-derivative."""
    g = cmath.exp(log_gamma(1 - s) + s * math.log(2) + (s - 1) * math.log(math.pi))
    sn, cs = cmath.sin(math.pi * s / 2), cmath.cos(math.pi * s / 2)
    chi = g * sn
    dchi = g * (sn * (_LOG_2PI - digamma(1 - s)) + 0.5 * math.pi * cs)
    return chi, dchi


def _reflected(s: complex, need_prime: bool) -> tuple[complex, complex | None]:
    z1, zp1 = zeta_pair_array(np.array([1 - s]))
    chi, dchi = _chi_and_prime(s)
    z = chi * complex(z1[0])
    if not need_prime:
        return z, None
    return z, dchi * complex(z1[0]) - chi * complex(zp1[0])


def _validate(s) -> complex:
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError("argument must be finite")
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    return s


def zeta(s, method: str = "auto") -> complex:
    """Riemann zeta; ``method`` is ``auto`` (reflect when Re s < 0), ``em`` or ``reflect``."""
    s = _validate(s)
    if method == "reflect" or (method == "auto" and s.real < 0):
        return _reflected(s, False)[0]
    if method not in ("auto", "em"):
        raise ValueError(f"unknown method {method!r}")
    return complex(zeta_pair_array(np.array([s]), need_prime=False)[0][0])


def zeta_prime(s, method: str = "auto") -> complex:
    s = _validate(s)
    if method == "reflect" or (method == "auto" and s.real < 0):
        return _reflected(s, True)[1]
    if method not in ("auto", "em"):
        raise ValueError(f"unknown method {method!r}")
    return complex(zeta_pair_array(np.array([s]))[1][0])


def zeta_real(x: float) -> float:
    return zeta(x).real


@lru_cache(maxsize=None)
def zeta_prime_even(k: int) -> float:
    """zeta'(2k) for 1 <= k <= 32."""
    if not 1 <= k <= 32:
        raise ValueError("k must lie in 1..32")
    return float(zeta_prime_even_dw(k))


def _tail_start(m: int, s: float) -> int:
    return max(m, int(abs(s)) + 20)


def power_tail(m: int, s: float, n_terms: int = 14) -> float:
    """sum_{n >= m} n^-s for real s > 1, by direct terms then Euler-Maclaurin."""
    if s <= 1:
        raise DomainError("power tail needs s > 1")
    big = _tail_start(m, s)
    head = math.fsum(n ** -s for n in range(m, big))
    x = float(big)
    parts = [head, x ** (1 - s) / (s - 1), 0.5 * x ** -s]
    poch = s
    for k in range(1, n_terms + 1):
        mm = 2 * k - 1
        # f^(m)(x) = (-1)^m (s)_m x^(-s-m); minus sign of the EM remainder absorbs (-1)^m
        parts.append(_B2K_OVER_FACT[k - 1] * poch * x ** (-s - mm))
        poch *= (s + mm) * (s + mm + 1)
    return math.fsum(parts)


def log_power_tail(m: int, s: float, n_terms: int = 14) -> float:
    """sum_{n >= m} log(n) n^-s for real s > 1."""
    if s <= 1:
        raise DomainError("log power tail needs s > 1")
    big = _tail_start(m, s)
    head = math.fsum(math.log(n) * n ** -s for n in range(max(m, 2), big))
    x = float(big)
    lx = math.log(x)
    parts = [head, x ** (1 - s) * (lx / (s - 1) + 1 / (s - 1) ** 2), 0.5 * lx * x ** -s]
    poch = s
    harm = 1 / s
    for k in range(1, n_terms + 1):
        mm = 2 * k - 1
        parts.append(_B2K_OVER_FACT[k - 1] * poch * x ** (-s - mm) * (lx - harm))
        poch *= (s + mm) * (s + mm + 1)
        harm += 1 / (s + mm) + 1 / (s + mm + 1)
    return math.fsum(parts)
