"""Gauss-Kronrod (G7/K15) adaptive quadrature and an oscillatory tail integrator.

Integrands are called with a 1-d numpy array of abscissae and must return an
array of the same shape (real or complex).  Pass ``vectorized=False`` to wrap a
scalar function instead.
"""

from __future__ import annotations

import heapq
import math
from typing import Callable

import numpy as np

from ..errors import NonConvergenceError
from .types import QuadratureResult, Tolerance

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# 15 nodes on [-1, 1] and the matching weights; Gauss nodes are the odd Kronrod ones
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps

Integrand = Callable[[np.ndarray], np.ndarray]


def _as_vector(f, vectorized: bool) -> Integrand:
    if vectorized:
        return f
    return lambda x: np.array([f(float(u)) for u in x])


def gk15_panels(f: Integrand, lo: np.ndarray, hi: np.ndarray):
    """Apply the G7/K15 pair to a batch of panels with a single integrand call.

    Returns ``(kronrod, error, at_floor)``: the error is the embedded-rule
    difference floored at the rounding level of the panel, and ``at_floor``
    marks panels where bisection can no longer help.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    y = np.asarray(f(x)).reshape(len(lo), 15)
    k = half * (y @ _KW)
    g = half * (y @ _GW)
    resabs = np.abs(half) * (np.abs(y) @ _KW)
    err = np.maximum(np.abs(k - g), 2 * _EPS * resabs)
    return k, err, np.abs(k - g) <= 2 * _EPS * resabs


def _adaptive_finite(f: Integrand, a: float, b: float, tol: Tolerance,
                     panel: float | None, budget: int) -> QuadratureResult:
    n0 = 1 if not panel else max(1, math.ceil((b - a) / panel))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    k, e, _ = gk15_panels(f, lo, hi)
    evals = 15 * n0
    heap = [(-float(e[i]), float(lo[i]), float(hi[i]), complex(k[i])) for i in range(n0)]
    floored: set[tuple[float, float]] = set()
    heapq.heapify(heap)
    total = complex(np.sum(k))
    err = float(np.sum(e))
    while True:
        target = tol.target(abs(total))
        if err <= target:
            break
        if evals + 30 > budget:
            return QuadratureResult(complex(total), err, evals, False)
        # bisect the worst panels until they account for half of the excess
        chosen = []
        removed = 0.0
        max_batch = max(1, (budget - evals) // 30)
        while heap and removed < 0.5 * (err - target) and len(chosen) < max_batch:
            ne, l, h, kv = heapq.heappop(heap)
            chosen.append((l, h, kv, -ne))
            removed += -ne
        widths = [h - l for l, h, _, _ in chosen]
        stuck = all((l, h) in floored for l, h, _, _ in chosen)
        if stuck or min(widths) < 1e-13 * max(1.0, abs(a), abs(b)):
            for l, h, kv, ev in chosen:
                heapq.heappush(heap, (-ev, l, h, kv))
            return QuadratureResult(complex(total), err, evals, False)
        lo = np.array([l for l, _, _, _ in chosen for _ in range(2)])
        hi = np.array([h for _, h, _, _ in chosen for _ in range(2)])
        mid = 0.5 * (lo + hi)
        hi[0::2] = mid[0::2]
        lo[1::2] = mid[1::2]
        kk, ee, at_floor = gk15_panels(f, lo, hi)
        evals += 15 * len(lo)
        floored.update((float(lo[j]), float(hi[j])) for j in np.nonzero(at_floor)[0])
        for i, (_, _, kv, ev) in enumerate(chosen):
            total += complex(kk[2 * i] + kk[2 * i + 1]) - kv
            err += float(ee[2 * i] + ee[2 * i + 1]) - ev
            for j in (2 * i, 2 * i + 1):
                heapq.heappush(heap, (-float(ee[j]), float(lo[j]), float(hi[j]), complex(kk[j])))
        # resum to shed the drift of incremental updates
        total = complex(math.fsum(c[3].real for c in heap), math.fsum(c[3].imag for c in heap))
        err = math.fsum(-c[0] for c in heap)
    return QuadratureResult(complex(total), err, evals, True)


def integrate_adaptive(f, a: float, b: float, tol: Tolerance = Tolerance(), *,
                       vectorized: bool = True, panel: float | None = None,
                       growth: float = 2.0) -> QuadratureResult:
    """Integrate ``f`` over ``[a, b]``; ``b`` may be ``math.inf``.

    Finite ranges use global adaptive bisection of G7/K15 panels, optionally
    starting from a uniform grid of width ``panel``.  A semi-infinite range is
    cut into panels whose widths grow geometrically; integration stops once
    three consecutive panels contribute less than a tenth of the absolute
    target.  When ``tol.max_evals`` runs out the best value is returned with
    ``converged=False``.
    """
    fv = _as_vector(f, vectorized)
    if not math.isfinite(a):
        raise ValueError("lower limit must be finite")
    if b == a:
        return QuadratureResult(0j, 0.0, 0, True)
    if math.isfinite(b):
        if b < a:
            r = _adaptive_finite(fv, b, a, tol, panel, tol.max_evals)
            return QuadratureResult(-r.value, r.err_estimate, r.n_evals, r.converged)
        return _adaptive_finite(fv, a, b, tol, panel, tol.max_evals)
    if b != math.inf:
        raise ValueError("upper limit must be finite or +inf")

    width = panel or 1.0
    left = a
    parts: list[complex] = []
    err = 0.0
    evals = 0
    quiet = 0
    converged = True
    while quiet < 3:
        running = abs(sum(parts)) if parts else 0.0
        sub = Tolerance(max(tol.abs_tol, tol.rel_tol * running) / 8, tol.rel_tol,
                        tol.max_terms, tol.max_evals)
        r = _adaptive_finite(fv, left, left + width, sub, None, tol.max_evals - evals)
        evals += r.n_evals
        err += r.err_estimate
        parts.append(r.value)
        converged = converged and r.converged
        total = abs(sum(parts))
        floor = max(tol.abs_tol, tol.rel_tol * total) / 10
        quiet = quiet + 1 if abs(r.value) < floor else 0
        left += width
        width *= growth
        if evals >= tol.max_evals or not math.isfinite(left):
            converged = False
            break
    value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
    return QuadratureResult(value, err, evals, converged and err <= tol.target(abs(value)))


def _euler_estimate(partials: list[complex], levels: int) -> complex:
    """Repeated pairwise averaging of the last ``levels + 1`` partial sums."""
    row = partials[-(levels + 1):]
    for _ in range(levels):
        row = [0.5 * (row[i] + row[i + 1]) for i in range(len(row) - 1)]
    return row[0]


def integrate_oscillatory(g, tol: Tolerance = Tolerance(), *, kind: str = "cos",
                          freq: float = 1.0, vectorized: bool = True,
                          levels: int = 16, min_panels: int = 24) -> QuadratureResult:
    """Integrate ``g(u) * cos(freq*u)`` (or ``sin``) over ``[0, inf)``.

    Panels end at consecutive zeros of the oscillating factor, so for an
    eventually monotone ``g`` the panel integrals alternate in sign.  The
    partial sums are then accelerated by repeated averaging (Euler's
    transformation).  Raises :class:`NonConvergenceError` with the best
    estimate when successive estimates stop improving within budget.
    """
    if kind not in ("cos", "sin"):
        raise ValueError("kind must be 'cos' or 'sin'")
    if freq <= 0:
        raise ValueError("frequency must be positive")
    gv = _as_vector(g, vectorized)
    osc = np.cos if kind == "cos" else np.sin

    def integrand(u: np.ndarray) -> np.ndarray:
        return gv(u) * osc(freq * u)

    step = math.pi / freq
    first = 0.5 * step if kind == "cos" else step
    partials: list[complex] = []
    total = 0j
    evals = 0
    err_q = 0.0
    best = None
    history: list[float] = []
    k = 0
    while True:
        lo = 0.0 if k == 0 else first + (k - 1) * step
        hi = first + k * step
        scale = abs(total) if partials else 0.0
        # panel errors add up over many panels, so each gets a hundredth of the target
        sub = Tolerance(max(tol.abs_tol, tol.rel_tol * scale) / 100 or 1e-300,
                        max(tol.rel_tol / 100, 1e-15), tol.max_terms, tol.max_evals)
        r = _adaptive_finite(integrand, lo, hi, sub, None, max(30, tol.max_evals - evals))
        evals += r.n_evals
        err_q += r.err_estimate
        total += r.value
        partials.append(total)
        k += 1
        if len(partials) >= max(min_panels, levels + 2):
            est = _euler_estimate(partials, levels)
            prev = _euler_estimate(partials[:-1], levels)
            diff = abs(est - prev)
            history.append(diff)
            best = est
            target = tol.target(abs(est))
            if diff <= target / 4 and (len(history) < 2 or history[-2] <= target):
                err = diff + err_q
                return QuadratureResult(est, err, evals, err <= target or diff == 0.0)
            if len(history) > 40 and min(history[-20:]) >= min(history[:-20]):
                raise NonConvergenceError("oscillatory acceleration stagnated",
                                          partial=best, terms_used=k)
        if evals >= tol.max_evals or k >= tol.max_terms:
            raise NonConvergenceError("oscillatory integration budget exhausted",
                                      partial=best if best is not None else total, terms_used=k)
