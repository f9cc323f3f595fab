"""Registry of identity checks: parameter axes, default grids and runners.

Each entry turns one parameter point into an :class:`IdentityReport`.  The
default grids are the points exercised by ``verify --all``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Callable

import numpy as np

from .errors import DomainError
from .kloosterman import (LineIntegralSpec, analogue_dgkm_check, dgkm_identity_check,
                          kernel_quadrature, kloosterman_line_check, lemma42_closed_form,
                          lemma42_series, lemma42_tail_bound)
from .lambert import (LambertParams, asymptotic_logy0, lambert_log_alt_check, lambert_log_check,
                      lambert_log_lhs, lambert_log_lhs_extended, maineqn_check, ramanujan_check,
                      wigert_check)
from .numerics.types import Tolerance
from .reports import IdentityReport
from .special.expint import sinhshi_minus_coshchi
from .special.mittag import ml_d2b_at1
from .special.psi1 import psi1, psi1_asymptotic, psi1_optimal_index

Point = dict[str, Any]


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    paper_ref: str
    axes: tuple[str, ...]
    defaults: Point  # fallback for axes missing from a user grid
    grid: tuple[Point, ...]
    run: Callable[[Point], IdentityReport]
    validate: Callable[[Point], None]
    sample: Callable[[np.random.Generator], Point] | None = None


def rejudge(report: IdentityReport, abs_tol: float | None, rel_tol: float | None) -> IdentityReport:
    """Re-evaluate pass/fail under overridden tolerances."""
    a = report.abs_tol if abs_tol is None else abs_tol
    r = report.rel_tol if rel_tol is None else rel_tol
    passed = report.abs_err <= a or report.rel_err <= r
    return replace(report, abs_tol=a, rel_tol=r, passed=passed)


# ---------------------------------------------------------------- validators

def _need_re_y(pt: Point) -> None:
    LambertParams(complex(pt["y"]))


def _need_sector_y(pt: Point) -> None:
    LambertParams(complex(pt["y"])).require_sector()


def _need_re_w(pt: Point) -> None:
    if not complex(pt["w"]).real > 0:
        raise DomainError("Re(w) must be positive")


def _need_ramanujan(pt: Point) -> None:
    m = pt["m"]
    if m != int(m) or int(m) == 0:
        raise DomainError("m must be a nonzero integer")
    if not float(pt["alpha"]) > 0:
        raise DomainError("alpha must be positive")


def _need_maineqn(pt: Point) -> None:
    y = complex(pt["y"])
    if y.imag != 0:
        raise DomainError("only real y is supported")
    if not y.real > 0:
        raise DomainError("Re(y) must be positive")
    a = complex(pt["a"])
    if a.imag != 0:
        raise DomainError("only real a is supported")


def _need_line(pt: Point) -> None:
    z = complex(pt["z"])
    if z.imag == 0 and z.real <= 0:
        raise DomainError("z must avoid the non-positive real axis")
    LineIntegralSpec(c=float(pt["c"]))


def _need_psi1_asym(pt: Point) -> None:
    z = complex(pt["z"])
    if z.imag == 0 and z.real <= 0:
        raise DomainError("z must avoid the non-positive real axis")
    if abs(z) < 2:
        raise DomainError("|z| must be at least 2")


def _need_logy0(pt: Point) -> None:
    _need_sector_y(pt)
    if int(pt["K"]) < 1:
        raise DomainError("K must be at least 1")


# ---------------------------------------------------------------- runners

def _mittag_check(pt: Point) -> IdentityReport:
    w = complex(pt["w"])
    series = ml_d2b_at1(w, "series")
    integral = ml_d2b_at1(w, "integral")
    return IdentityReport.compare("mittag_d2b", "second b-derivative of E_2,b at b = 1",
                                  {"w": w}, series, integral, 1e-8, 1e-300)


def _kernel_cosine_check(pt: Point) -> IdentityReport:
    w = complex(pt["w"])
    return IdentityReport.compare("kernel_cosine", "sinh Shi - cosh Chi as a cosine integral",
                                  {"w": w}, kernel_quadrature(w), sinhshi_minus_coshchi(w),
                                  1e-8, 1e-300)


def _digamma_series_check(pt: Point) -> IdentityReport:
    w = complex(pt["w"])
    K = 1
    while lemma42_tail_bound(w, K) > 1e-17 * max(1.0, abs(w)):
        K += 1
    return IdentityReport.compare("digamma_power_series", "digamma power series in Shi/Chi form",
                                  {"w": w}, lemma42_series(w, K), lemma42_closed_form(w),
                                  1e-8, 1e-300, {"K": K},
                                  diagnostics={"tail_bound": lemma42_tail_bound(w, K)})


def _psi1_asym_check(pt: Point) -> IdentityReport:
    z = complex(pt["z"])
    k_opt = psi1_optimal_index(z)
    trunc = psi1_asymptotic(z, k_opt)
    ref = psi1(z, mode="reference")
    bound = 2 * trunc.first_omitted
    return IdentityReport.compare("psi1_asymptotic", "large-z expansion of psi_1",
                                  {"z": z}, ref, trunc.value, bound, 0.0, {"K": k_opt},
                                  diagnostics={"first_omitted": trunc.first_omitted})


def _logy0_check(pt: Point) -> IdentityReport:
    y = complex(pt["y"])
    K = int(pt["K"])
    if y.imag == 0:
        direct = lambert_log_lhs_extended(y.real)
        asym = asymptotic_logy0(y.real, K, extended=True)
        diff = float(direct - asym.value)
        lhs = complex(float(direct))
        rhs = lhs - diff
    else:
        lhs = lambert_log_lhs(LambertParams(y, Tolerance(1e-300, 1e-16)))
        asym = asymptotic_logy0(y, K)
        rhs = asym.value
    nxt = abs(asym.next_term)
    report = IdentityReport.compare("logy0", "small-y expansion of the log-Lambert series",
                                    {"y": y, "K": K}, lhs, rhs, 10 * nxt, 0.0, {"K": K},
                                    diagnostics={"next_term": nxt})
    if y.imag == 0:
        # the difference is formed in double-word; keep it rather than the rounded sides
        report = replace(report, abs_err=abs(diff), passed=abs(diff) <= 10 * nxt)
    return report


# ---------------------------------------------------------------- samplers

def _sample_y(rng: np.random.Generator) -> Point:
    while True:
        y = complex(round(rng.uniform(0.2, 4.0), 6), round(rng.uniform(-2.0, 2.0), 6))
        if abs(y) <= 5:
            return {"y": y}


def _sample_w(rng: np.random.Generator) -> Point:
    return {"w": complex(round(rng.uniform(0.5, 3.0), 6), round(rng.uniform(-1.0, 1.0), 6))}


def _sample_real_w(rng: np.random.Generator) -> Point:
    return {"w": complex(round(rng.uniform(0.3, 3.0), 6))}


def _sample_line(rng: np.random.Generator) -> Point:
    z = complex(round(rng.uniform(0.5, 3.0), 6), round(rng.uniform(-2.0, 2.0), 6))
    return {"z": z, "c": round(rng.uniform(0.2, 0.8), 6)}


def _ys(*vals) -> tuple[Point, ...]:
    return tuple({"y": complex(v)} for v in vals)


def _ws(*vals) -> tuple[Point, ...]:
    return tuple({"w": complex(v)} for v in vals)


_LAMBERT_GRID = _ys(1, 0.5, 3 + 2j, 0.3 + 0.2j)

REGISTRY: dict[str, IdentitySpec] = {s.name: s for s in (
    IdentitySpec("lambert_log", "log-Lambert transformation", ("y",), {"y": 1 + 0j},
                 _LAMBERT_GRID, lambda pt: lambert_log_check(LambertParams(pt["y"])),
                 _need_re_y, _sample_y),
    IdentitySpec("lambert_log_alt", "log-Lambert transformation, rearranged form", ("y",),
                 {"y": 1 + 0j}, _LAMBERT_GRID,
                 lambda pt: lambert_log_alt_check(LambertParams(pt["y"], Tolerance(1e-300, 1e-8))),
                 _need_re_y, _sample_y),
    IdentitySpec("wigert", "Wigert's transformation of the divisor Lambert series", ("y",), {"y": 1 + 0j},
                 _ys(1, 2 * math.pi, 5 + 3j),
                 lambda pt: wigert_check(LambertParams(pt["y"], Tolerance(1e-300, 1e-10))),
                 _need_re_y, _sample_y),
    IdentitySpec("ramanujan", "Ramanujan's formula for odd zeta values", ("m", "alpha"),
                 {"m": 1, "alpha": math.pi},
                 ({"m": 1, "alpha": 1.0}, {"m": 1, "alpha": math.pi},
                  {"m": 2, "alpha": math.pi / 2}),
                 lambda pt: ramanujan_check(int(pt["m"]), float(pt["alpha"])), _need_ramanujan),
    IdentitySpec("maineqn", "sigma_a Lambert transformation with a 1F2 kernel", ("a", "y"),
                 {"a": 0.5, "y": 8 + 0j},
                 ({"a": 0.5, "y": 8 + 0j}, {"a": 1.5, "y": 8 + 0j}),
                 lambda pt: maineqn_check(complex(pt["a"]).real, LambertParams(pt["y"])),
                 _need_maineqn),
    IdentitySpec("dgkm", "kernel series in digamma form", ("w",), {"w": 1 + 0j},
                 _ws(1, 2, 1 + 1j), lambda pt: dgkm_identity_check(pt["w"]), _need_re_w, _sample_w),
    IdentitySpec("kloosterman_line", "psi_1 as a vertical-line Mellin integral", ("z", "c"),
                 {"z": 2 + 0j, "c": 0.5},
                 tuple({"z": complex(z), "c": c} for z in (2, 1 + 1j) for c in (0.3, 0.7)),
                 lambda pt: kloosterman_line_check(pt["z"], LineIntegralSpec(c=float(pt["c"]))),
                 _need_line, _sample_line),
    IdentitySpec("analogue_dgkm", "psi_1 analogue of the kernel series", ("w",), {"w": 1 + 0j},
                 _ws(1, 2), lambda pt: analogue_dgkm_check(pt["w"]), _need_re_w),
    IdentitySpec("mittag_d2b", "second b-derivative of E_2,b at b = 1", ("w",), {"w": 1 + 0j},
                 _ws(0.5, 1, 2), _mittag_check, _need_re_w, _sample_real_w),
    IdentitySpec("kernel_cosine", "sinh Shi - cosh Chi as a cosine integral", ("w",), {"w": 1 + 0j},
                 _ws(0.5, 1, 2), _kernel_cosine_check, _need_re_w, _sample_w),
    IdentitySpec("digamma_power_series", "digamma power series in Shi/Chi form", ("w",), {"w": 1 + 0j},
                 _ws(0.5, 1, 2), _digamma_series_check, _need_re_w, _sample_w),
    IdentitySpec("psi1_asymptotic", "large-z expansion of psi_1", ("z",), {"z": 20j},
                 ({"z": 20j}, {"z": -15 + 15j}, {"z": 30 + 0j}), _psi1_asym_check, _need_psi1_asym),
    IdentitySpec("logy0", "small-y expansion of the log-Lambert series", ("y", "K"),
                 {"y": 0.05 + 0j, "K": 3}, ({"y": 0.05 + 0j, "K": 3},), _logy0_check, _need_logy0),
)}

# theorem-style names accepted on the command line
ALIASES = {"thm1.1": "lambert_log", "thm1.2": "logy0", "thm3.1": "psi1_asymptotic"}


def resolve(name: str) -> IdentitySpec:
    key = ALIASES.get(name.lower(), name.lower())
    if key not in REGISTRY:
        known = ", ".join(sorted(REGISTRY) + sorted(ALIASES))
        raise KeyError(f"unknown identity {name!r}; known: {known}")
    return REGISTRY[key]


def loglog_slope(xs: list[float], errs: list[float]) -> float:
    """Least-squares slope of log(err) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    le = np.log(np.asarray(errs, dtype=float))
    return float(np.polyfit(lx, le, 1)[0])

