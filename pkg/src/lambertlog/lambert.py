"""Lambert series of logarithms and their modular-type transformations.

Conventions: ``x_n = 2 pi n / y`` and the two bracket series

* ``W(y) = sum_n {log x_n - (psi(i x_n) + psi(-i x_n))/2}``
* ``P(y) = sum_n {psi1(i x_n) + psi1(-i x_n) - (log^2(i x_n) + log^2(-i x_n))/2 + y/(4n)}``

Both are summed directly while ``|x_n| < 20`` and through their large-``x``
expansions beyond, where the n-sums collapse onto zeta tails.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CancellationError, DomainError, NonConvergenceError
from .numerics.bernoulli import DEFAULT_CAP, bernoulli, bernoulli_float
from .numerics.doubleword import PI, ExtendedValue, dw_exp, dw_log
from .numerics.types import Tolerance
from .reports import IdentityReport
from .special.constants import (EULER_GAMMA, euler_gamma_dw, glaisher_log_A,
                                glaisher_log_A_dw, log_2pi_dw, zeta_prime_even_dw)
from .special.gamma import digamma, gamma_dw
from .special.mittag import hyp1f2
from .special.psi1 import psi1
from .special.zeta import log_power_tail, power_tail, zeta, zeta_real

LOG_2PI = math.log(2 * math.pi)
BRACKET_SWITCH = 20.0
# double-word carries about 32 digits; rounding in the 1F2 recursion and the
# smallness of the bracket itself cost up to 10 more, which leaves 4 spare
CANCELLATION_DIGITS = 18.0
DEFAULT_TOL = Tolerance(abs_tol=1e-300, rel_tol=1e-9)


@dataclass(frozen=True)
class LambertParams:
    y: complex
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self) -> None:
        y = complex(self.y)
        if not (math.isfinite(y.real) and math.isfinite(y.imag)):
            raise DomainError("y must be finite")
        if not y.real > 0:
            raise DomainError("Re(y) must be positive")
        object.__setattr__(self, "y", y)

    def require_sector(self) -> None:
        if not abs(cmath.phase(self.y)) < math.pi / 2:
            raise DomainError("the small-y expansion needs |arg y| < pi/2")


def _as_params(p) -> LambertParams:
    return p if isinstance(p, LambertParams) else LambertParams(complex(p))


def _csum(values) -> complex:
    vals = np.asarray(values, dtype=complex)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


# ---------------------------------------------------------------- divisors

def divisor_counts(n_max: int) -> np.ndarray:
    """d(n) for 0 <= n <= n_max (entry 0 unused)."""
    d = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    return d


@lru_cache(maxsize=16)
def _sigma_table(a: float, n_max: int) -> np.ndarray:
    s = np.zeros(n_max + 1, dtype=float)
    for k in range(1, n_max + 1):
        s[k::k] += float(k) ** a
    s.flags.writeable = False
    return s


def divisor_sigmas(a: float, n_max: int) -> np.ndarray:
    """sigma_a(n) = sum_{k | n} k^a for 0 <= n <= n_max (entry 0 unused)."""
    return _sigma_table(float(a), int(n_max))


# ---------------------------------------------------------------- direct sums

def lambert_sum(weight, y: complex, tol: Tolerance, weight_bound=None,
                chunk: int | None = None) -> tuple[complex, int]:
    """``sum_n weight(n) / (e^{ny} - 1)`` with a geometric tail bound.

    ``weight`` maps an integer array to weights; ``weight_bound(N)`` must bound
    ``|weight(n)|`` for ``n >= N`` up to slowly varying factors (default
    ``max(1, log N)``).  Returns the sum and the number of terms used.
    """
    x = y.real
    if not x > 0:
        raise DomainError("Re(y) must be positive")
    if weight_bound is None:
        weight_bound = lambda n: max(1.0, math.log(n))  # noqa: E731
    chunk = chunk or max(64, int(40 / x) + 1)
    parts: list[complex] = []
    start = 1
    q = -math.expm1(-x)
    while start <= tol.max_terms:
        stop = min(start + chunk, tol.max_terms + 1)
        n = np.arange(start, stop, dtype=float)
        e = np.exp(-n * y)
        terms = weight(n) * e / -np.expm1(-n * y)
        parts.append(_csum(terms))
        start = stop
        total = math.fsum(p.real for p in parts) + 1j * math.fsum(p.imag for p in parts)
        big = start
        bound = weight_bound(big) * math.exp(-big * x) / (q * -math.expm1(-big * x))
        if bound <= tol.target(abs(total)):
            return total, start - 1
    raise NonConvergenceError("Lambert series tail bound not met within the term budget",
                              partial=_csum(parts), terms_used=tol.max_terms)


def lambert_log_lhs(p, tol: Tolerance | None = None) -> complex:
    """``sum_n log(n) / (e^{ny} - 1)``."""
    p = _as_params(p)
    tol = tol or p.tol.scaled(0.1)
    value, _ = lambert_sum(np.log, p.y, tol)
    return value if p.y.imag != 0 else complex(value.real)


def lambert_log_lhs_divisor(p, tol: Tolerance | None = None) -> complex:
    """The same series as ``(1/2) sum_n d(n) log(n) e^{-ny}``."""
    p = _as_params(p)
    tol = tol or p.tol.scaled(0.1)
    x = p.y.real
    n_max = 64
    while math.log(n_max) * n_max * math.exp(-n_max * x) > tol.target(1e-3) * 1e-3:
        n_max *= 2
        if n_max > tol.max_terms:
            raise NonConvergenceError("divisor-weighted series exceeded the term budget")
    d = divisor_counts(n_max)[1:]
    n = np.arange(1, n_max + 1, dtype=float)
    return 0.5 * _csum(d * np.log(n) * np.exp(-n * p.y))


@lru_cache(maxsize=8)
def _log_table_dw(n_max: int) -> tuple[ExtendedValue, ...]:
    """log n in double-word for n <= n_max via a smallest-prime-factor sieve."""
    spf = list(range(n_max + 1))
    for i in range(2, int(n_max**0.5) + 1):
        if spf[i] == i:
            for j in range(i * i, n_max + 1, i):
                if spf[j] == j:
                    spf[j] = i
    logs = [ExtendedValue(0.0)] * (n_max + 1)
    for n in range(2, n_max + 1):
        pf = spf[n]
        logs[n] = dw_log(n) if pf == n else logs[pf] + logs[n // pf]
    return tuple(logs)


def lambert_log_lhs_extended(y: float, digits: float = 34.0) -> ExtendedValue:
    """``sum_n log(n) / (e^{ny} - 1)`` in double-word for real ``y > 0``."""
    y = float(y)
    if not y > 0:
        raise DomainError("extended evaluation needs real y > 0")
    n_max = int(digits * math.log(10) / y) + 2
    logs = _log_table_dw(n_max)
    q = dw_exp(-ExtendedValue(y))
    qn = ExtendedValue(1.0)
    acc = ExtendedValue(0.0)
    for n in range(1, n_max + 1):
        # refresh the power every 256 steps to keep rounding from accumulating
        qn = dw_exp(-ExtendedValue(y) * n) if n % 256 == 0 else qn * q
        if n > 1:
            acc = acc + logs[n] * qn / (1 - qn)
    return acc


# ---------------------------------------------------------------- bracket series

def digamma_bracket(n: int, y: complex) -> complex:
    """``log x - (psi(ix) + psi(-ix))/2`` at ``x = 2 pi n / y``."""
    x = 2 * math.pi * n / y
    return cmath.log(x) - 0.5 * (digamma(1j * x) + digamma(-1j * x))


def psi1_bracket(n: int, y: complex) -> complex:
    """``psi1(ix) + psi1(-ix) - (log^2(ix) + log^2(-ix))/2 + y/(4n)`` at ``x = 2 pi n / y``."""
    x = 2 * math.pi * n / y
    zp, zm = 1j * x, -1j * x
    lp, lm = cmath.log(zp), cmath.log(zm)
    return psi1(zp) + psi1(zm) - 0.5 * (lp * lp + lm * lm) + y / (4 * n)


def _head_length(y: complex) -> int:
    return max(0, math.ceil(BRACKET_SWITCH * abs(y) / (2 * math.pi)))


def _tail_series(terms, cap: int = DEFAULT_CAP // 2) -> tuple[complex, int]:
    """Sum an asymptotic tail until it stalls or stops shrinking."""
    acc: list[complex] = []
    prev = math.inf
    k = 0
    for k in range(1, cap + 1):
        t = terms(k)
        if abs(t) >= prev:
            break
        acc.append(t)
        prev = abs(t)
        if abs(t) < 1e-18 * abs(sum(acc)):
            break
    return _csum(acc), k


@dataclass(frozen=True)
class BracketSums:
    digamma_series: complex
    psi1_series: complex
    head: int
    tail_terms: int


def bracket_sums(y: complex) -> BracketSums:
    """The series ``W(y)`` and ``P(y)``: direct head plus expansion tail."""
    y = complex(y)
    n_head = _head_length(y)
    w_head = [digamma_bracket(n, y) for n in range(1, n_head + 1)]
    p_head = [psi1_bracket(n, y) for n in range(1, n_head + 1)]
    c2 = (y / (2 * math.pi)) ** 2
    log_ratio = cmath.log(2 * math.pi / y)
    m = n_head + 1

    def w_term(k: int) -> complex:
        return (-1) ** k * bernoulli_float(2 * k) / (2 * k) * c2**k * power_tail(m, 2 * k)

    def p_term(k: int) -> complex:
        h = math.fsum(1.0 / j for j in range(1, 2 * k))
        z_k, l_k = power_tail(m, 2 * k), log_power_tail(m, 2 * k)
        return (-1) ** k * bernoulli_float(2 * k) / k * c2**k * ((h - log_ratio) * z_k - l_k)

    w_tail, kw = _tail_series(w_term)
    p_tail, kp = _tail_series(p_term)
    return BracketSums(_csum(w_head + [w_tail]), _csum(p_head + [p_tail]), n_head, max(kw, kp))


def lambert_log_rhs(p) -> complex:
    """Right-hand side of the log-Lambert transformation."""
    p = _as_params(p)
    y = p.y
    b = bracket_sums(y)
    ly = cmath.log(y)
    g = EULER_GAMMA
    parts = [-0.25 * LOG_2PI, ly * ly / (2 * y), -g * g / (2 * y), math.pi**2 / (12 * y),
             -2 / y * (g + ly) * b.digamma_series, b.psi1_series / y]
    value = _csum(parts)
    return value if y.imag != 0 else complex(value.real)


def _report(name: str, ref: str, params: dict, lhs, rhs, tol: Tolerance, terms=None) -> IdentityReport:
    return IdentityReport.compare(name, ref, params, lhs, rhs, tol.abs_tol, tol.rel_tol, terms)


def lambert_log_check(p) -> IdentityReport:
    """Direct log-Lambert sum against its bracket-series transform."""
    p = _as_params(p)
    inner = p.tol.scaled(0.1)
    lhs, n_lhs = lambert_sum(np.log, p.y, inner)
    b = bracket_sums(p.y)
    return _report("lambert_log", "log-Lambert transformation", {"y": p.y}, lhs,
                   lambert_log_rhs(p), p.tol,
                   {"lhs": n_lhs, "head": b.head, "tail": b.tail_terms})


def lambert_log_alt_check(p) -> IdentityReport:
    """Rearranged form: ``gamma + log(ny)`` weighted sum against ``P(y)``."""
    p = _as_params(p)
    y = p.y
    inner = p.tol.scaled(0.1)
    ly = cmath.log(y)
    g = EULER_GAMMA
    s, n_lhs = lambert_sum(lambda n: g + ly + np.log(n), y, inner,
                           weight_bound=lambda n: abs(g + ly) + math.log(n))
    lhs = _csum([y * s, -0.25 * y * ly, y * (0.25 * LOG_2PI - 0.25 * g), 0.5 * ly * ly,
                 -0.5 * g * g, -math.pi**2 / 12])
    b = bracket_sums(y)
    return _report("lambert_log_alt", "log-Lambert transformation, rearranged form",
                   {"y": y}, lhs, b.psi1_series, p.tol,
                   {"lhs": n_lhs, "head": b.head, "tail": b.tail_terms})


def wigert_check(p) -> IdentityReport:
    """``sum 1/(e^{ny} - 1)`` against Wigert's digamma-bracket transform."""
    p = _as_params(p)
    y = p.y
    lhs, n_lhs = lambert_sum(np.ones_like, y, p.tol.scaled(0.1), weight_bound=lambda n: 1.0)
    b = bracket_sums(y)
    rhs = _csum([0.25, (EULER_GAMMA - cmath.log(y)) / y, 2 / y * b.digamma_series])
    return _report("wigert", "Wigert's transformation of the divisor Lambert series",
                   {"y": y}, lhs, rhs, p.tol, {"lhs": n_lhs, "head": b.head, "tail": b.tail_terms})


# ---------------------------------------------------------------- Ramanujan

def ramanujan_bernoulli_block(m: int, alpha: float, beta: float) -> float:
    """``sum_{j=0}^{m+1} (-1)^j B_2j B_{2m+2-2j} alpha^{m+1-j} beta^j / ((2j)! (2m+2-2j)!)``."""
    parts = []
    for j in range(0, m + 2):
        c = bernoulli(2 * j) * bernoulli(2 * m + 2 - 2 * j) / (
            math.factorial(2 * j) * math.factorial(2 * m + 2 - 2 * j))
        parts.append((-1) ** j * float(c) * alpha ** (m + 1 - j) * beta**j)
    return math.fsum(parts)


def _ramanujan_side(m: int, t: float, tol: Tolerance) -> tuple[float, int]:
    zeta_odd = zeta(2 * m + 1).real
    s, n = lambert_sum(lambda k: k ** (-2.0 * m - 1), complex(2 * t), tol,
                       weight_bound=lambda k: max(1.0, float(k) ** (-2.0 * m - 1)))
    return 0.5 * zeta_odd + s.real, n


def ramanujan_check(m: int, alpha: float, tol: Tolerance = Tolerance(1e-300, 1e-10)) -> IdentityReport:
    """Ramanujan's formula for ``zeta(2m+1)`` with ``alpha beta = pi^2``."""
    m = int(m)
    if m == 0:
        raise DomainError("m must be a nonzero integer")
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    beta = math.pi**2 / alpha
    inner = tol.scaled(0.1)
    a_side, na = _ramanujan_side(m, alpha, inner)
    b_side, nb = _ramanujan_side(m, beta, inner)
    lhs = alpha ** (-m) * a_side
    rhs = (-1) ** m * beta ** (-m) * b_side - 2 ** (2 * m) * ramanujan_bernoulli_block(m, alpha, beta)
    return _report("ramanujan", "Ramanujan's formula for odd zeta values",
                   {"m": m, "alpha": alpha}, lhs, rhs, tol, {"alpha": na, "beta": nb})


# ---------------------------------------------------------------- sigma_a Lambert series

def _real_a(a) -> float:
    a = complex(a)
    if a.imag != 0:
        raise DomainError("only real a is supported (the bracket is evaluated in real double-word)")
    a = a.real
    if not a > -1:
        raise DomainError("the sigma_a transformation needs Re(a) > -1")
    if a == 2 * round(a / 2):
        raise DomainError("a must not be an even integer (cosec pole)")
    return a


def maineqn_lhs(a: float, y: float, tol: Tolerance = Tolerance(1e-300, 1e-15)) -> tuple[float, int]:
    a = _real_a(a)
    y = float(y)
    x = y
    n_max = 16
    while (n_max ** max(a, 0.0) * math.log(n_max + 1) * 2) * math.exp(-n_max * x) > tol.target(1e-3) * 1e-3:
        n_max *= 2
    sig = divisor_sigmas(a, n_max)[1:]
    n = np.arange(1, n_max + 1, dtype=float)
    series = math.fsum(sig * np.exp(-n * y))
    cosec = 1 / math.sin(math.pi * a / 2)
    block = 0.5 * ((2 * math.pi / y) ** (1 + a) * cosec + 1) * zeta_real(-a)
    return math.fsum([series, block, -zeta_real(1 - a) / y]), n_max


def maineqn_bracket(a: float, y: float, n: int) -> ExtendedValue:
    """``(2 pi n)^-a 1F2(...)/Gamma(1-a) - (2 pi/y)^a cosh(4 pi^2 n / y)`` in double-word."""
    fa = Fraction(a)
    two_pi = PI * 2
    big_x = two_pi * two_pi * n / y
    lead = dw_exp(-(dw_log(two_pi * n) * fa)) / gamma_dw(1 - fa)
    f = hyp1f2(1, (1 - fa) / 2, 1 - fa / 2, big_x * big_x * 0.25)
    ex = dw_exp(big_x)
    cosh = (ex + 1 / ex) * 0.5
    return lead * f - dw_exp(dw_log(two_pi / y) * fa) * cosh


def cancellation_digits(y: float, n: int) -> float:
    """Decimal digits lost forming the bracket at ``n``: about ``4 pi^2 n / (y ln 10)``."""
    return 4 * math.pi**2 * n / (y * math.log(10))


def _sigma_dirichlet_tail(a: float, k: int, n_direct: int) -> float:
    """``sum_{n > n_direct} sigma_a(n) n^{-a-2k}``.

    Low k subtract the head from ``zeta(a+2k) zeta(2k)``; higher k, whose tails
    are too small for that difference, are summed directly.
    """
    s = a + 2 * k
    start = n_direct + 1
    if k <= 2 or start == 1:
        sig = divisor_sigmas(a, max(n_direct, 1))
        head = math.fsum(sig[j] * j ** (-s) for j in range(1, n_direct + 1))
        return zeta_real(s) * zeta_real(2 * k) - head
    stop = int(start * 10 ** (15 / (2 * k - 1))) + 1
    sig = divisor_sigmas(a, stop)[start:]
    n = np.arange(start, stop + 1, dtype=float)
    return math.fsum(sig * n ** (-s))


def _maineqn_tail(a: float, y: float, n_direct: int) -> tuple[float, int]:
    """Bracket-series tail for n > n_direct from ``-(2 pi n)^-a sum_k X^-2k / Gamma(1-a-2k)``."""
    fa = Fraction(a)
    c = y / (4 * math.pi**2)
    scale = (2 * math.pi) ** (-a)
    x_min = 4 * math.pi**2 * (n_direct + 1) / y
    parts = []
    prev = math.inf
    k = 0
    for k in range(1, 200):
        inv_gamma = 1 / float(gamma_dw(1 - fa - 2 * k))
        # size of the k-th term at the first tail index decides truncation
        size = abs(inv_gamma) * x_min ** (-2 * k)
        if size >= prev:
            break
        parts.append(-scale * inv_gamma * c ** (2 * k) * _sigma_dirichlet_tail(a, k, n_direct))
        prev = size
        if size < 1e-22:
            break
    return math.fsum(parts), k


def maineqn_rhs(a: float, y: float, n_direct: int | None = None,
                max_digits: float = CANCELLATION_DIGITS) -> tuple[float, int]:
    a = _real_a(a)
    y = float(y)
    if not y > 0:
        raise DomainError("only real y > 0 is supported")
    if n_direct is None:
        n_direct = int(max_digits * math.log(10) * y / (4 * math.pi**2))
    for n in range(1, n_direct + 1):
        need = cancellation_digits(y, n)
        if need > max_digits:
            raise CancellationError(
                f"bracket at n = {n} needs {need:.1f} digits of cancellation, "
                f"more than the {max_digits:g} available", n=n,
                digits_needed=need, digits_allowed=max_digits)
    sig = divisor_sigmas(a, max(n_direct, 1))
    direct = ExtendedValue(0.0)
    for n in range(1, n_direct + 1):
        direct = direct + maineqn_bracket(a, y, n) * float(sig[n])
    tail, k = _maineqn_tail(a, y, n_direct)
    pref = 2 * math.pi / (y * math.sin(math.pi * a / 2))
    return pref * (float(direct) + tail), n_direct


def maineqn_check(a, p, n_direct: int | None = None,
                  tol: Tolerance = Tolerance(1e-300, 1e-6)) -> IdentityReport:
    """The sigma_a Lambert transformation with a 1F2 kernel.

    Raises :class:`CancellationError` naming the first n whose bracket would
    need more cancellation than double-word arithmetic can absorb.
    """
    p = _as_params(p)
    if p.y.imag != 0:
        raise DomainError("only real y is supported")
    y = p.y.real
    a = _real_a(a)
    lhs, n_lhs = maineqn_lhs(a, y)
    rhs, n_dir = maineqn_rhs(a, y, n_direct)
    return _report("maineqn", "sigma_a Lambert transformation with a 1F2 kernel",
                   {"a": a, "y": y}, lhs, rhs, tol, {"lhs": n_lhs, "direct": n_dir})


# ---------------------------------------------------------------- small-y expansion

@dataclass(frozen=True)
class AsymptoticValue:
    value: complex | ExtendedValue
    next_term: complex
    K: int


def _harmonic_fraction(m: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, m + 1)), Fraction(0))


@lru_cache(maxsize=None)
def logy0_coefficient_dw(k: int) -> ExtendedValue:
    """Coefficient of ``y^{2k-1}`` in the small-y expansion, ``k >= 2``."""
    b = bernoulli(2 * k)
    inner = (euler_gamma_dw() - ExtendedValue.from_value(_harmonic_fraction(2 * k - 1)) + log_2pi_dw()) \
        * ExtendedValue.from_value(b / (2 * math.factorial(2 * k)))
    zp = zeta_prime_even_dw(k) / (PI * 2) ** (2 * k)
    inner = inner + zp if k % 2 == 0 else inner - zp
    return inner * ExtendedValue.from_value(b / k)


def logy0_coefficient(k: int) -> float:
    if k == 1:
        return (glaisher_log_A() - 1 / 12) / 12
    return float(logy0_coefficient_dw(k))


def asymptotic_logy0(y, K: int, extended: bool = False) -> AsymptoticValue:
    """Small-y expansion of ``sum log(n)/(e^{ny}-1)`` through ``k = K``.

    ``extended`` evaluates in double-word (real ``y`` only).
    """
    if K < 1:
        raise DomainError("K must be at least 1")
    p = LambertParams(complex(y))
    p.require_sector()
    y = p.y
    nxt = logy0_coefficient(K + 1) * y ** (2 * K + 1)
    if extended:
        if y.imag != 0:
            raise DomainError("extended evaluation needs real y")
        yv = ExtendedValue(y.real)
        ly = dw_log(yv)
        g = euler_gamma_dw()
        pi2 = PI * PI
        acc = ly * ly / (yv * 2) + (pi2 / 12 - g * g * 0.5) / yv - log_2pi_dw() * 0.25
        acc = acc + yv * ((glaisher_log_A_dw() - Fraction(1, 12)) / 12)
        for k in range(2, K + 1):
            acc = acc + logy0_coefficient_dw(k) * yv ** (2 * k - 1)
        return AsymptoticValue(acc, nxt, K)
    ly = cmath.log(y)
    g = EULER_GAMMA
    parts = [ly * ly / (2 * y), (math.pi**2 / 12 - g * g / 2) / y, -0.25 * LOG_2PI,
             y * logy0_coefficient(1)]
    parts += [logy0_coefficient(k) * y ** (2 * k - 1) for k in range(2, K + 1)]
    value = _csum(parts)
    return AsymptoticValue(value if y.imag != 0 else complex(value.real), nxt, K)
