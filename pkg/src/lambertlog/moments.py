"""Smoothed moments of zeta on the critical line.

``smoothed_moment`` integrates ``zeta(1/2 - it) zeta'(1/2 + it) e^{-delta t}``
over ``[0, t_cap]`` on panels of width 1/2 and subtracts the closed-form
leading term.  ``sw2nd_calibration`` runs the same pipeline on
``|zeta(1/2 + it)|^2``, whose leading term is classical.

``rotated_series_route`` gives an independent value of the first moment:
with ``y = 2 pi i (e^{-i delta} - 1)`` and
``S = sum d(n) log(n) e^{-ny} = 2 sum log(n)/(e^{ny} - 1)``,

    moment = phi(delta) - pi e^{-i delta/2} S
             + i e^{i delta/2} (gamma^2/2 - pi^2/12 - log^2(2 pi i e^{-i delta})/2),

where ``phi`` is a pair of exponentially decaying integrals along ``t >= 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonConvergenceError
from .lambert import LambertParams, lambert_log_lhs, lambert_log_rhs
from .numerics.quadrature import integrate_adaptive
from .numerics.types import Tolerance
from .special.constants import EULER_GAMMA
from .special.zeta import zeta_pair_array

PANEL = 0.5
_CHUNK = 2048
MOMENT_TOL = Tolerance(1e-13, 1e-13, max_evals=5_000_000)


@dataclass(frozen=True)
class MomentParams:
    delta: float
    tol: Tolerance = field(default=MOMENT_TOL)
    t_cap: float | None = None

    def __post_init__(self) -> None:
        d = float(self.delta)
        if not 0 < d < math.pi:
            raise DomainError("delta must lie in (0, pi)")
        object.__setattr__(self, "delta", d)
        cap = 40 / d if self.t_cap is None else float(self.t_cap)
        if cap < 40 / d:
            raise DomainError("t_cap must be at least 40/delta")
        object.__setattr__(self, "t_cap", cap)


@dataclass(frozen=True)
class MomentReport:
    delta: float
    value: complex
    leading: complex
    residual: complex
    evals: int
    err_estimate: float
    t_cap: float

    def as_record(self) -> dict:
        def cj(z: complex) -> dict[str, float]:
            return {"re": z.real, "im": z.imag}

        return {"delta": self.delta, "value": cj(self.value), "leading": cj(self.leading),
                "residual": cj(self.residual), "evals": self.evals,
                "err_estimate": self.err_estimate, "t_cap": self.t_cap}


def _chunked(fn, t: np.ndarray) -> np.ndarray:
    # neighbouring t share a chunk, so each chunk gets a cutoff sized to its own heights
    out = np.empty(t.shape, dtype=complex)
    for i in range(0, t.size, _CHUNK):
        out[i:i + _CHUNK] = fn(t[i:i + _CHUNK])
    return out


def zeta_pair_integrand(t) -> np.ndarray:
    """``zeta(1/2 - it) zeta'(1/2 + it)``, i.e. ``conj(zeta(1/2+it)) zeta'(1/2+it)``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise DomainError("t must be non-negative")

    def fn(tt: np.ndarray) -> np.ndarray:
        z, zp = zeta_pair_array(0.5 + 1j * tt)
        return np.conj(z) * zp

    return _chunked(fn, t)


def conjugate_pair_integrand(t) -> np.ndarray:
    """``zeta(1/2 + it) zeta'(1/2 - it)`` from separate evaluations at both points."""
    t = np.atleast_1d(np.asarray(t, dtype=float))

    def fn(tt: np.ndarray) -> np.ndarray:
        z, _ = zeta_pair_array(0.5 + 1j * tt, need_prime=False)
        _, zp = zeta_pair_array(0.5 - 1j * tt)
        return z * zp

    return _chunked(fn, t)


def abs_zeta_squared(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))

    def fn(tt: np.ndarray) -> np.ndarray:
        z, _ = zeta_pair_array(0.5 + 1j * tt, need_prime=False)
        return (z.real * z.real + z.imag * z.imag).astype(complex)

    return _chunked(fn, t)


def moment_leading_term(delta: float) -> float:
    """``(-log^2(2 pi delta) + gamma^2 - pi^2/6) / (4 sin(delta/2))``."""
    delta = float(delta)
    if not 0 < delta < 2 * math.pi:
        raise DomainError("delta must lie in (0, 2 pi)")
    lg = math.log(2 * math.pi * delta)
    return (-lg * lg + EULER_GAMMA**2 - math.pi**2 / 6) / (4 * math.sin(delta / 2))


def sw2nd_leading_term(delta: float) -> float:
    """``(gamma - log(2 pi delta)) / (2 sin(delta/2))``."""
    delta = float(delta)
    if not 0 < delta < 2 * math.pi:
        raise DomainError("delta must lie in (0, 2 pi)")
    return (EULER_GAMMA - math.log(2 * math.pi * delta)) / (2 * math.sin(delta / 2))


def _smoothed(integrand, p: MomentParams):
    delta = p.delta

    def f(t: np.ndarray) -> np.ndarray:
        return integrand(t) * np.exp(-delta * t)

    r = integrate_adaptive(f, 0.0, p.t_cap, p.tol, panel=PANEL)
    if not r.converged:
        raise NonConvergenceError("moment quadrature did not converge", partial=r.value,
                                  terms_used=r.n_evals)
    return r


def smoothed_moment(p) -> MomentReport:
    """``int_0^inf zeta(1/2-it) zeta'(1/2+it) e^{-delta t} dt`` and its residual."""
    p = p if isinstance(p, MomentParams) else MomentParams(float(p))
    r = _smoothed(zeta_pair_integrand, p)
    lead = complex(moment_leading_term(p.delta))
    return MomentReport(p.delta, r.value, lead, r.value - lead, r.n_evals, r.err_estimate, p.t_cap)


def conjugate_moment(p) -> complex:
    """``int_0^inf zeta(1/2+it) zeta'(1/2-it) e^{-delta t} dt``; equals the conjugate moment."""
    p = p if isinstance(p, MomentParams) else MomentParams(float(p))
    return _smoothed(conjugate_pair_integrand, p).value


def sw2nd_calibration(p) -> MomentReport:
    """``int_0^inf |zeta(1/2+it)|^2 e^{-delta t} dt`` minus its classical leading term."""
    p = p if isinstance(p, MomentParams) else MomentParams(float(p))
    r = _smoothed(abs_zeta_squared, p)
    value = complex(r.value.real)
    lead = complex(sw2nd_leading_term(p.delta))
    return MomentReport(p.delta, value, lead, value - lead, r.n_evals, r.err_estimate, p.t_cap)


def cauchy_converging(residuals: list[complex]) -> bool:
    """True when successive residual differences shrink (deltas halving)."""
    diffs = [abs(residuals[i + 1] - residuals[i]) for i in range(len(residuals) - 1)]
    return all(diffs[i + 1] < diffs[i] for i in range(len(diffs) - 1))


def extract_d0(deltas: list[float], residuals: list[complex]) -> complex:
    """Polynomial extrapolation of the residuals to ``delta = 0``."""
    total = 0j
    for i, (di, ri) in enumerate(zip(deltas, residuals)):
        w = 1.0
        for j, dj in enumerate(deltas):
            if j != i:
                w *= dj / (dj - di)
        total += w * ri
    return total


# ---------------------------------------------------------------- rotated series

def rotated_y(delta: float) -> complex:
    """``y = 2 pi i (e^{-i delta} - 1) = 2 pi (sin delta + i (cos delta - 1))``."""
    return 2 * math.pi * complex(math.sin(delta), math.cos(delta) - 1)


def _phi_integrand(t: np.ndarray, delta: float) -> np.ndarray:
    """``i q/(1 + i q) zeta(1/2-it) zeta'(1/2+it) e^{-delta t}
    + i q/(1 - i q) zeta(1/2+it) zeta'(1/2-it) e^{delta t}`` with ``q = e^{-pi t}``."""
    z, zp = zeta_pair_array(0.5 + 1j * t)
    zc, zpc = np.conj(z), np.conj(zp)  # zeta(1/2 - it), zeta'(1/2 - it)
    iq = 1j * np.exp(-np.pi * t)
    return iq * (zc * zp * np.exp(-delta * t) / (1 + iq) + z * zpc * np.exp(delta * t) / (1 - iq))


def phi_integrals(delta: float, tol: Tolerance = MOMENT_TOL) -> complex:
    """The analytic remainder ``phi(delta)`` as two decaying integrals."""
    t_cap = 45 / (math.pi - delta)
    r = integrate_adaptive(lambda t: _phi_integrand(t, delta), 0.0, t_cap, tol, panel=PANEL)
    return r.value


@dataclass(frozen=True)
class RotatedRoute:
    delta: float
    y: complex
    series_lhs: complex
    series_rhs: complex
    phi: complex
    moment: complex

    @property
    def rel_err(self) -> float:
        return abs(self.series_lhs - self.series_rhs) / abs(self.series_lhs)


def rotated_series_route(delta: float) -> RotatedRoute:
    """The divisor-log series at the rotated point by both Lambert routes, and
    the moment it implies."""
    delta = float(delta)
    if not 0 < delta < math.pi / 2:
        raise DomainError("delta must lie in (0, pi/2)")
    y = rotated_y(delta)
    p = LambertParams(y)
    lhs = 2 * lambert_log_lhs(p)
    rhs = 2 * lambert_log_rhs(p)
    phi = phi_integrals(delta)
    lg = cmath.log(2j * math.pi * cmath.exp(-1j * delta))
    block = EULER_GAMMA**2 / 2 - math.pi**2 / 12 - lg * lg / 2
    moment = phi - math.pi * cmath.exp(-0.5j * delta) * lhs + 1j * cmath.exp(0.5j * delta) * block
    return RotatedRoute(delta, y, lhs, rhs, phi, moment)
