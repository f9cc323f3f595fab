"""Integral identities around psi and psi_1.

* ``sum_n int_0^inf t cos t / (t^2 + n^2 w^2) dt`` in digamma terms;
* psi_1 as a vertical-line Mellin integral;
* ``4 sum_m int_0^inf u cos u log(u/w) / (u^2 + (2 pi m w)^2) du`` in psi_1 terms.

Inner integrals ``int_0^inf t cos t/(t^2 + v^2) dt`` equal the kernel
``f(v) = sinh(v)Shi(v) - cosh(v)Chi(v)``.  For large ``v`` both kinds of inner
integral follow ``-sum_j (2j-1)! v^-2j`` (times ``psi(2j) - log w`` when the
weight carries ``log(u/w)``), so the outer sums collapse onto zeta tails.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonConvergenceError
from .numerics.quadrature import integrate_adaptive, integrate_oscillatory
from .numerics.types import Tolerance
from .reports import IdentityReport
from .special.constants import EULER_GAMMA
from .special.expint import sinhshi_minus_coshchi
from .special.gamma import digamma
from .special.psi1 import psi1
from .special.zeta import power_tail, zeta_pair_array

# inner integrals switch to the large-argument expansion at |v| >= 40
KERNEL_SWITCH = 40.0
QUAD_TOL = Tolerance(1e-15, 1e-14)


def _check_w(w) -> complex:
    w = complex(w)
    if not w.real > 0:
        raise DomainError("these identities need Re(w) > 0")
    return w


def _csum(values) -> complex:
    vals = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _harmonic(n: int) -> float:
    return math.fsum(1.0 / j for j in range(1, n + 1))


def _inverse_power_tail(w: complex, start: int, weight) -> tuple[complex, int]:
    """``sum_{n >= start} sum_j (2j-1)! (n w)^-2j weight(j)`` at optimal truncation."""
    inv2 = 1 / (w * w)
    parts = []
    prev = math.inf
    fact = 1.0  # (2j-1)!
    x_min = abs(start * w)
    j = 0
    for j in range(1, 60):
        if j > 1:
            fact *= (2 * j - 2) * (2 * j - 1)
        size = fact / x_min ** (2 * j)
        if size >= prev:
            break
        parts.append(fact * inv2**j * weight(j) * power_tail(start, 2 * j))
        prev = size
        if size < 1e-20:
            break
    return _csum(parts), j


# ---------------------------------------------------------------- the kernel and its digamma series

def kernel_quadrature(v, tol: Tolerance = QUAD_TOL) -> complex:
    """``int_0^inf t cos t / (t^2 + v^2) dt`` by oscillatory quadrature."""
    v2 = complex(v) ** 2
    return integrate_oscillatory(lambda t: t / (t * t + v2), tol).value


def lemma42_series(w, K: int) -> complex:
    """``sum_{k=0}^{K} psi(2k+1) w^2k / (2k)!`` (digamma at integers is ``H_2k - gamma``)."""
    w = _check_w(w)
    if K < 0:
        raise DomainError("K must be non-negative")
    w2 = w * w
    t = 1 + 0j
    h = 0.0
    parts = []
    for k in range(K + 1):
        parts.append((h - EULER_GAMMA) * t)
        h += 1.0 / (2 * k + 1) + 1.0 / (2 * k + 2)
        t = t * w2 / ((2 * k + 1) * (2 * k + 2))
    return _csum(parts)


def lemma42_tail_bound(w, K: int) -> float:
    """Bound on the terms after ``k = K``; valid once ``2K + 2 > |w|``."""
    a = abs(complex(w))
    k = K + 1
    first = (math.log(2 * k) + 1) * a ** (2 * k) / math.factorial(2 * k)
    ratio = a * a / ((2 * k + 1) * (2 * k + 2))
    return math.inf if ratio >= 1 else first / (1 - ratio)


def lemma42_closed_form(w) -> complex:
    w = _check_w(w)
    return sinhshi_minus_coshchi(w) + cmath.log(w) * cmath.cosh(w)


# ---------------------------------------------------------------- DGKM sum

def dgkm_lhs(w) -> tuple[complex, dict[str, int]]:
    """``sum_n f(nw)``: closed-form head plus expansion tail."""
    w = _check_w(w)
    head = max(math.ceil(KERNEL_SWITCH / w.real), math.ceil(KERNEL_SWITCH / abs(w)))
    values = [sinhshi_minus_coshchi(n * w) for n in range(1, head + 1)]
    tail, j = _inverse_power_tail(w, head + 1, lambda j: -1.0)
    return _csum(values + [tail]), {"head": head, "tail": j}


def dgkm_rhs(w) -> complex:
    w = _check_w(w)
    z = w / (2 * math.pi)
    return 0.5 * (cmath.log(z) - 0.5 * (digamma(1j * z) + digamma(-1j * z)))


def dgkm_identity_check(w, tol: Tolerance = Tolerance(1e-8, 1e-300),
                        cross_check: int = 3) -> IdentityReport:
    """Kernel sum against its digamma form; the first ``cross_check`` inner
    integrals are also recomputed by quadrature (largest gap in diagnostics)."""
    w = _check_w(w)
    lhs, terms = dgkm_lhs(w)
    gap = 0.0
    for n in range(1, cross_check + 1):
        gap = max(gap, abs(kernel_quadrature(n * w) - sinhshi_minus_coshchi(n * w)))
    return IdentityReport.compare("dgkm", "kernel series in digamma form", {"w": w}, lhs,
                                  dgkm_rhs(w), tol.abs_tol, tol.rel_tol, terms,
                                  diagnostics={"quadrature_gap": gap})


# ---------------------------------------------------------------- Mellin line

@dataclass(frozen=True)
class LineIntegralSpec:
    c: float = 0.5
    t_max: float = 40.0
    tol: Tolerance = field(default=Tolerance(1e-12, 1e-12))

    def __post_init__(self) -> None:
        if not 0 < self.c < 1:
            raise DomainError("the line abscissa must lie in (0, 1)")
        if not self.t_max > 0:
            raise DomainError("t_max must be positive")


def _check_z(z) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real <= 0:
        raise DomainError("z must avoid the non-positive real axis")
    return z


def kloosterman_integrand(s, z) -> np.ndarray:
    """``pi zeta(1-s)/sin(pi s) (gamma - log z + psi(s)) z^-s`` on an array of ``s``."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    z = _check_z(z)
    lz = cmath.log(z)
    zeta_1ms, _ = zeta_pair_array(1 - s, need_prime=False)
    psi = np.array([digamma(complex(v)) for v in s])
    # pi/sin(pi s) written with the decaying exponential to avoid overflow
    upper = s.imag >= 0
    e = np.where(upper, np.exp(1j * np.pi * s), np.exp(-1j * np.pi * s))
    sign = np.where(upper, 2j, -2j)
    # combine e^{+-i pi s} with z^-s in one exponent so neither overflows
    log_e = np.where(upper, 1j * np.pi * s, -1j * np.pi * s)
    factor = sign * np.exp(log_e - s * lz) / (e * e - 1)
    return np.pi * zeta_1ms * factor * (EULER_GAMMA - lz + psi)


def _line_tail_bound(z: complex, c: float, t: float) -> float:
    decay = math.pi - abs(cmath.phase(z))
    vals = kloosterman_integrand(np.array([c + 1j * t, c - 1j * t]), z)
    return float(np.max(np.abs(vals))) / (2 * math.pi) / decay * 2


def kloosterman_line_value(z, spec: LineIntegralSpec = LineIntegralSpec()) -> tuple[complex, int, float]:
    """``(1/2 pi i) int_(c) ... ds`` with doubling ``t_max``; returns (value, evals, t_max)."""
    z = _check_z(z)
    c = spec.c
    t_max = spec.t_max
    for _ in range(8):
        if _line_tail_bound(z, c, t_max) < spec.tol.abs_tol / 10:
            break
        t_max *= 2
    else:
        raise NonConvergenceError("line-integral tail bound unreachable", terms_used=int(t_max))

    def h(t: np.ndarray) -> np.ndarray:
        # pair t with -t: for real z the imaginary parts cancel exactly
        up = kloosterman_integrand(c + 1j * t, z)
        down = kloosterman_integrand(c - 1j * t, z)
        return (up + down) / (2 * math.pi)

    r = integrate_adaptive(h, 0.0, t_max, spec.tol, panel=1.0)
    value = r.value if z.imag != 0 else complex(r.value.real)
    return value, r.n_evals, t_max


def kloosterman_line_check(z, spec: LineIntegralSpec = LineIntegralSpec(),
                           tol: Tolerance = Tolerance(1e-8, 1e-300)) -> IdentityReport:
    z = _check_z(z)
    lhs_val = psi1(z + 1) - 0.5 * cmath.log(z) ** 2
    rhs, evals, t_max = kloosterman_line_value(z, spec)
    return IdentityReport.compare("kloosterman_line", "psi_1 as a vertical-line Mellin integral",
                                  {"z": z, "c": spec.c}, lhs_val, rhs, tol.abs_tol, tol.rel_tol,
                                  {"t_max": int(t_max)}, evals)


# ---------------------------------------------------------------- psi_1 analogue of the DGKM sum

def log_kernel_quadrature(v, w, tol: Tolerance = QUAD_TOL) -> complex:
    """``int_0^inf u cos u log(u/w) / (u^2 + v^2) du`` by oscillatory quadrature."""
    v2 = complex(v) ** 2
    lw = cmath.log(complex(w))
    return integrate_oscillatory(lambda u: u * (np.log(u) - lw) / (u * u + v2), tol).value


def log_kernel_split(v, w, tol: Tolerance = QUAD_TOL) -> complex:
    """The same integral as ``int u cos u log u/(u^2+v^2) du - log(w) f(v)``."""
    v2 = complex(v) ** 2
    part = integrate_oscillatory(lambda u: u * np.log(u) / (u * u + v2), tol).value
    return part - cmath.log(complex(w)) * kernel_quadrature(v, tol)


@dataclass(frozen=True)
class AnalogueSum:
    value: complex
    terms: int
    tail: complex


def analogue_dgkm_lhs(w, m_terms: int | None = None, tol: Tolerance = QUAD_TOL) -> AnalogueSum:
    """``4 sum_m int u cos u log(u/w)/(u^2 + (2 pi m w)^2) du``.

    Terms up to ``m_terms`` are integrated; the remainder uses the expansion
    ``sum_j (2j-1)! v^-2j (log w - psi(2j))`` with ``v = 2 pi m w``.
    """
    w = _check_w(w)
    step = 2 * math.pi * w
    if m_terms is None:
        m_terms = max(1, math.ceil(30 / abs(step)))
    parts = []
    for m in range(1, m_terms + 1):
        try:
            parts.append(log_kernel_quadrature(m * step, w, tol))
        except NonConvergenceError as exc:
            raise NonConvergenceError(f"inner integral failed at m = {m}: {exc}",
                                      partial=exc.partial, terms_used=m) from exc
    lw = cmath.log(w)
    tail, _ = _inverse_power_tail(step, m_terms + 1,
                                  lambda j: lw + EULER_GAMMA - _harmonic(2 * j - 1))
    value = 4 * _csum(parts + [tail])
    return AnalogueSum(value, m_terms, 4 * tail)


def analogue_dgkm_rhs(w) -> complex:
    w = _check_w(w)
    zp, zm = 1j * w, -1j * w
    lp, lm = cmath.log(zp), cmath.log(zm)
    return _csum([psi1(zp), -0.5 * lp * lp, psi1(zm), -0.5 * lm * lm, math.pi / (2 * w),
                  EULER_GAMMA * (digamma(zp) + digamma(zm) - 2 * cmath.log(w))])


def analogue_dgkm_check(w, tol: Tolerance = Tolerance(1e-6, 1e-300),
                        m_terms: int | None = None) -> IdentityReport:
    w = _check_w(w)
    lhs = analogue_dgkm_lhs(w, m_terms)
    rhs = analogue_dgkm_rhs(w)
    if w.imag == 0:
        lhs_v, rhs = complex(lhs.value.real), complex(rhs.real)
    else:
        lhs_v = lhs.value
    return IdentityReport.compare("analogue_dgkm", "psi_1 analogue of the kernel series",
                                  {"w": w}, lhs_v, rhs, tol.abs_tol, tol.rel_tol,
                                  {"m": lhs.terms}, diagnostics={"tail": abs(lhs.tail)})
