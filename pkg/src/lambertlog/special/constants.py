"""Stieltjes constants, the Glaisher-Kinkelin constant and double-word constants.

Every value is computed from its limit definition with an Euler-Maclaurin
correction at a modest cutoff, then cached.  Nothing here is a typed-in
literal except ln 2 and pi inside :mod:`..numerics.doubleword`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..numerics.bernoulli import bernoulli
from ..numerics.doubleword import LN2, PI, ExtendedValue, dw_log

_lock = threading.Lock()


@dataclass(frozen=True)
class StieltjesConstants:
    gamma0: float
    gamma1: float
    gamma2: float


def _series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    return np.convolve(a, b)[: order + 1]


def _log_power_derivative(x: float, k: int, m: int) -> float:
    """m-th derivative of ``log(x)**k / x``.

    Uses ``log(x)**k / x = (-1)**k d^k/ds^k x**(-s)`` at ``s = 1`` and the
    closed form ``d^m/dx^m x**(-s) = (-1)**m (s)_m x**(-s-m)``, expanding in
    powers of ``e = s - 1``.
    """
    poch = np.zeros(k + 1)
    poch[0] = 1.0
    for i in range(m):
        factor = np.zeros(k + 1)
        factor[0] = 1.0 + i
        if k >= 1:
            factor[1] = 1.0
        poch = _series_mul(poch, factor, k)
    lx = math.log(x)
    expo = np.array([(-lx) ** j / math.factorial(j) for j in range(k + 1)])
    coeffs = _series_mul(poch, expo, k)
    deriv_k = math.factorial(k) * coeffs[k]
    return (-1) ** k * (-1) ** m * deriv_k * x ** (-1 - m)


def _stieltjes_at(k: int, n: int = 64, terms: int = 14) -> float:
    # head sum in double-word; n = 64 makes log n = 6 ln 2 exact to double-word
    head = ExtendedValue(0.0)
    for j in range(1, n + 1):
        head = head + dw_log(j) ** k / j
    ln = LN2 * 6
    head = head - ln ** (k + 1) / (k + 1) - ln**k / (2 * n)
    corr = []
    for i in range(1, terms + 1):
        b = float(bernoulli(2 * i)) / math.factorial(2 * i)
        corr.append(-b * _log_power_derivative(n, k, 2 * i - 1))
    return float(head + math.fsum(corr))


@lru_cache(maxsize=None)
def stieltjes(k: int) -> float:
    """gamma_k for k in {0, 1, 2}, cached after first use."""
    if k not in (0, 1, 2):
        raise ValueError("only gamma_0, gamma_1, gamma_2 are provided")
    with _lock:
        return _stieltjes_at(k)


def stieltjes_constants() -> StieltjesConstants:
    return StieltjesConstants(stieltjes(0), stieltjes(1), stieltjes(2))


def _glaisher_fraction_tail(n: int, terms: int) -> Fraction:
    tail = Fraction(0)
    for j in range(2, terms + 2):
        tail += bernoulli(2 * j) / ((2 * j) * (2 * j - 1) * (2 * j - 2)) / Fraction(n) ** (2 * j - 2)
    return tail


@lru_cache(maxsize=None)
def glaisher_log_A_dw() -> ExtendedValue:
    """log A in double-word precision (cutoff n = 64 so log n = 6 ln 2)."""
    n = 64
    with _lock:
        acc = ExtendedValue(0.0)
        for k in range(2, n + 1):
            acc = acc + dw_log(k) * k
        poly = Fraction(n * n, 2) + Fraction(n, 2) + Fraction(1, 12)
        acc = acc - LN2 * 6 * ExtendedValue.from_value(poly)
        rest = Fraction(n * n, 4) + _glaisher_fraction_tail(n, 14)
        return acc + ExtendedValue.from_value(rest)


def glaisher_log_A() -> float:
    return float(glaisher_log_A_dw())


@lru_cache(maxsize=None)
def euler_gamma_dw() -> ExtendedValue:
    """Euler's constant to double-word precision via H_n - log n with n = 64."""
    n = 64
    h = sum((Fraction(1, j) for j in range(1, n + 1)), Fraction(0))
    corr = -Fraction(1, 2 * n)
    for i in range(1, 16):
        corr += bernoulli(2 * i) / (2 * i) / Fraction(n) ** (2 * i)
    return ExtendedValue.from_value(h + corr) - LN2 * 6


EULER_GAMMA = float(euler_gamma_dw())


@lru_cache(maxsize=None)
def log_2pi_dw() -> ExtendedValue:
    return dw_log(PI * 2)


@lru_cache(maxsize=None)
def zeta_prime_even_dw(k: int) -> ExtendedValue:
    """zeta'(2k) in double-word: direct sum to 63 plus an Euler-Maclaurin tail at 64."""
    if k < 1:
        raise ValueError("k must be positive")
    s = 2 * k
    n = 64
    acc = ExtendedValue(0.0)
    for j in range(2, n):
        acc = acc + dw_log(j) / ExtendedValue.from_value(Fraction(j) ** s)
    ln = LN2 * 6
    # tail sum_{j>=n} log(j) j^-s = integral + f(n)/2 - sum B_2i/(2i)! f^(2i-1)(n)
    inv = Fraction(1, n)
    tail = (ln / (s - 1) + ExtendedValue.from_value(Fraction(1, (s - 1) ** 2))) \
        * ExtendedValue.from_value(inv ** (s - 1))
    tail = tail + ln * ExtendedValue.from_value(inv**s / 2)
    for i in range(1, 14):
        m = 2 * i - 1
        poch = Fraction(1)
        harm = Fraction(0)
        for q in range(m):
            poch *= s + q
            harm += Fraction(1, s + q)
        # d^m/dx^m [log x x^-s] = (-1)^m (s)_m x^(-s-m) (log x - sum 1/(s+q))
        scale = bernoulli(2 * i) / math.factorial(2 * i) * (-1) ** m * poch * inv ** (s + m)
        tail = tail - (ln - ExtendedValue.from_value(harm)) * ExtendedValue.from_value(scale)
    return -(acc + tail)
