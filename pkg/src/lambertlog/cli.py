"""Command-line front end: ``lambertlog {eval,verify,asympt,moment,report}``.

Exit status: 0 when every row passes, 1 on a numerical failure or
non-convergence, 2 on a configuration error.  Option precedence is
command-line flag, then ``--config`` file (``key = value`` lines, ``#``
comments), then built-in defaults.  ``LAMBERTLOG_THREADS`` sets the default
worker count; rows are always emitted in input order.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable

import numpy as np

from . import __version__
from .errors import DomainError, NumericsError
from .lambert import LambertParams, asymptotic_logy0, lambert_log_lhs, lambert_log_lhs_extended
from .moments import (MomentParams, cauchy_converging, extract_d0, rotated_series_route,
                      smoothed_moment, sw2nd_calibration)
from .numerics.types import Tolerance
from .reports import complex_json
from .special.expint import sinhshi_minus_coshchi
from .special.gamma import digamma, log_gamma, trigamma
from .special.psi1 import psi1, psi1_asymptotic, psi1_optimal_index
from .special.zeta import zeta, zeta_prime
from .suite import REGISTRY, IdentitySpec, rejudge, resolve

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
THREADS_ENV = "LAMBERTLOG_THREADS"

# option name -> (builtin default, converter); these may come from a config file
CONFIG_KEYS: dict[str, tuple[Any, Callable[[str], Any]]] = {
    "format": (None, str),
    "output": (None, str),
    "threads": (None, int),
    "seed": (0, int),
    "random": (0, int),
    "abs_tol": (None, float),
    "rel_tol": (None, float),
    "timing": (False, lambda s: s.strip().lower() in ("1", "true", "yes", "on")),
}


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers

def parse_complex(text: str) -> complex:
    """``"re,im"`` or a bare real ``"re"``."""
    parts = [p.strip() for p in text.split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"cannot parse complex value {text!r}; expected re,im")


def parse_k_range(text: str) -> list[int]:
    """``"1..4"``, ``"2,5,7"`` or ``"3"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(k) for k in text.split(",") if k.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse K range {text!r}") from None
    if not ks:
        raise ConfigError(f"empty K range {text!r}")
    return ks


def parse_reals(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse list {text!r}") from None
    if not vals:
        raise ConfigError("empty list")
    return vals


def read_config(path: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key][1](value)
        except ValueError:
            raise ConfigError(f"{path}:{num}: bad value for {key}") from None
    return out


def resolve_options(args: argparse.Namespace) -> None:
    """Fill unset options from the config file, then the environment and defaults."""
    cfg = read_config(args.config) if args.config else {}
    for key, (default, _) in CONFIG_KEYS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, cfg.get(key, default))
    if args.threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        try:
            args.threads = int(env) if env else 1
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer") from None
    if args.threads < 1:
        raise ConfigError("thread count must be at least 1")


# ---------------------------------------------------------------- output

def _clean(x: Any) -> Any:
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, complex):
        return {k: _clean(v) for k, v in complex_json(x).items()}
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        return _clean(x.item())
    return x


def _flatten(record: dict[str, Any], prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "_"))
        elif isinstance(value, (list, tuple)):
            flat[name] = json.dumps(value)
        else:
            flat[name] = value
    return flat


def render(records: list[dict[str, Any]], fmt: str, extra: dict[str, Any] | None = None) -> str:
    records = [_clean(r) for r in records]
    if fmt == "json":
        body: Any = records if extra is None else {"rows": records, **_clean(extra)}
        return json.dumps(body, indent=2) + "\n"
    # columns grouped by top-level field, so params of different identities sit together
    groups: dict[str, list[str]] = {}
    rows = []
    for r in records:
        flat: dict[str, Any] = {}
        for key, value in r.items():
            part = _flatten({key: value})
            cols = groups.setdefault(key, [])
            cols.extend(c for c in part if c not in cols)
            flat.update(part)
        rows.append(flat)
    columns = [c for cols in groups.values() for c in cols]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({c: ("" if r.get(c) is None else r.get(c)) for c in columns})
    return buf.getvalue()


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_ordered(fn: Callable[[Any], Any], items: list[Any], threads: int) -> list[Any]:
    """Map ``fn`` over ``items`` on a worker pool; results keep input order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- verify

def _user_axes(args: argparse.Namespace) -> dict[str, list[Any]]:
    axes: dict[str, list[Any]] = {}
    for name in ("y", "w", "z"):
        vals = getattr(args, name)
        if vals:
            axes[name] = [parse_complex(v) for v in vals]
    for name in ("a", "alpha", "c"):
        vals = getattr(args, name)
        if vals:
            axes[name] = [v for text in vals for v in parse_reals(text)]
    if args.m:
        axes["m"] = [int(v) for text in args.m for v in parse_reals(text)]
    if args.K:
        axes["K"] = [k for text in args.K for k in parse_k_range(text)]
    return axes


def build_jobs(args: argparse.Namespace) -> list[tuple[IdentitySpec, dict[str, Any]]]:
    if args.all:
        specs = list(REGISTRY.values())
    elif args.identity:
        try:
            specs = [resolve(n) for text in args.identity for n in text.split(",") if n.strip()]
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
    else:
        raise ConfigError("select identities with --identity NAME or --all")
    axes = _user_axes(args)
    rng = np.random.default_rng(args.seed)
    jobs = []
    for spec in specs:
        if args.random:
            if spec.sample is None:
                raise ConfigError(f"{spec.name} has no random sampler")
            points = [spec.sample(rng) for _ in range(args.random)]
        elif not args.all and any(a in axes for a in spec.axes):
            names = [a for a in spec.axes]
            lists = [axes.get(a, [spec.defaults[a]]) for a in names]
            points = [dict(zip(names, combo)) for combo in itertools.product(*lists)]
        else:
            points = [dict(p) for p in spec.grid]
        for pt in points:
            try:
                spec.validate(pt)
            except (DomainError, ValueError) as exc:
                raise ConfigError(f"{spec.name}: {exc}") from None
            jobs.append((spec, pt))
    unused = [a for a in axes if not any(a in s.axes for s in specs)]
    if unused and not args.all:
        raise ConfigError(f"parameter(s) {', '.join(unused)} not used by the selected identities")
    return jobs


def _run_job(job: tuple[IdentitySpec, dict[str, Any]], args: argparse.Namespace) -> dict[str, Any]:
    spec, pt = job
    start = time.perf_counter()
    try:
        report = rejudge(spec.run(pt), args.abs_tol, args.rel_tol)
        record = report.as_record()
        record["error"] = None
    except NumericsError as exc:
        record = {"identity": spec.name, "paper_ref": spec.paper_ref, "params": dict(pt),
                  "lhs": None, "rhs": None, "abs_err": None, "rel_err": None, "pass": False,
                  "terms": {}, "evals": 0, "diagnostics": {},
                  "error": f"{type(exc).__name__}: {exc}"}
    record["wall_ms"] = round(1000 * (time.perf_counter() - start), 3) if args.timing else None
    return record


def cmd_verify(args: argparse.Namespace) -> int:
    jobs = build_jobs(args)
    records = run_ordered(lambda j: _run_job(j, args), jobs, args.threads)
    emit(render(records, args.format or "json"), args.output)
    failed = [r for r in records if not r["pass"]]
    print(f"{len(records) - len(failed)}/{len(records)} rows passed", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------- asympt

def _asympt_logy0(y: complex, K: int) -> dict[str, Any]:
    if y.imag == 0:
        direct = lambert_log_lhs_extended(y.real)
        asym = asymptotic_logy0(y.real, K, extended=True)
        diff = abs(float(direct - asym.value))
        direct_v, asym_v = complex(float(direct)), complex(float(asym.value))
    else:
        direct_v = lambert_log_lhs(LambertParams(y, Tolerance(1e-300, 1e-16)))
        asym = asymptotic_logy0(y, K)
        asym_v = asym.value
        diff = abs(direct_v - asym_v)
    return {"y": y, "K": K, "direct": direct_v, "expansion": asym_v, "abs_diff": diff,
            "next_term": abs(asym.next_term)}


def _asympt_psi1(z: complex, K: int) -> dict[str, Any]:
    ref = psi1(z, mode="reference")
    t = psi1_asymptotic(z, K)
    return {"z": z, "K": K, "direct": ref, "expansion": t.value, "abs_diff": abs(ref - t.value),
            "next_term": t.first_omitted, "optimal_K": psi1_optimal_index(z),
            "past_optimal": t.past_optimal}


def cmd_asympt(args: argparse.Namespace) -> int:
    target = args.target.lower()
    if target in ("thm1.2", "logy0"):
        key, fn = "y", _asympt_logy0
    elif target in ("thm3.1", "psi1_asymptotic"):
        key, fn = "z", _asympt_psi1
    else:
        raise ConfigError(f"unknown asymptotic target {args.target!r}; use thm1.2 or thm3.1")
    points = [parse_complex(v) for v in (getattr(args, key) or [])]
    ks = [k for text in (args.K or []) for k in parse_k_range(text)]
    if not points or not ks:
        raise ConfigError(f"empty grid: give --{key} and --K")
    for p in points:
        try:
            if key == "y":
                LambertParams(p).require_sector()
            elif p.imag == 0 and p.real <= 0 or abs(p) < 2:
                raise DomainError("z must have |z| >= 2 off the non-positive real axis")
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
    if min(ks) < 1:
        raise ConfigError("K must be at least 1")
    jobs = [(p, k) for p in points for k in ks]

    def one(job):
        start = time.perf_counter()
        row = fn(*job)
        row["wall_ms"] = round(1000 * (time.perf_counter() - start), 3) if args.timing else None
        return row

    try:
        rows = run_ordered(one, jobs, args.threads)
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    emit(render(rows, args.format or "csv"), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- moment

def _moment_rows(kind: str, reports) -> list[dict[str, Any]]:
    return [{"kind": kind, **r.as_record()} for r in reports]


def _cauchy_summary(kind: str, deltas: list[float], residuals: list[complex]) -> dict[str, Any]:
    ok = cauchy_converging(residuals) if len(residuals) >= 3 else None
    d0 = extract_d0(deltas, residuals) if len(residuals) >= 2 else None
    return {"kind": kind, "cauchy_converging": ok, "d0": d0}


def _say_summary(s: dict[str, Any]) -> None:
    d0 = s["d0"]
    d0_txt = "n/a" if d0 is None else f"{d0.real:.10g}{d0.imag:+.10g}i"
    print(f"{s['kind']}: cauchy_converging={s['cauchy_converging']} d0={d0_txt}", file=sys.stderr)


def cmd_moment(args: argparse.Namespace) -> int:
    deltas = [d for text in (args.delta or ["0.4,0.2,0.1"]) for d in parse_reals(text)]
    params = []
    for d in deltas:
        try:
            params.append(MomentParams(d))
        except DomainError as exc:
            raise ConfigError(f"delta = {d}: {exc}") from None
    if args.rotated and any(not d < math.pi / 2 for d in deltas):
        raise ConfigError("the rotated route needs delta in (0, pi/2)")
    fmt = args.format or "csv"
    rows: list[dict[str, Any]] = []
    summaries: list[dict[str, Any]] = []
    try:
        if args.calibrate:
            cal = run_ordered(sw2nd_calibration, params, args.threads)
            rows += _moment_rows("sw2nd", cal)
            s = _cauchy_summary("sw2nd", deltas, [r.residual for r in cal])
            summaries.append(s)
            _say_summary(s)
            if s["cauchy_converging"] is False:
                print("calibration failed; skipping the first-moment run", file=sys.stderr)
                emit(render(rows, fmt, {"summary": summaries} if fmt == "json" else None), args.output)
                return EXIT_FAIL
        first = run_ordered(smoothed_moment, params, args.threads)
        rows += _moment_rows("zeta_zeta_prime", first)
        s = _cauchy_summary("zeta_zeta_prime", deltas, [r.residual for r in first])
        summaries.append(s)
        _say_summary(s)
        if args.rotated:
            for route in run_ordered(rotated_series_route, deltas, args.threads):
                rows.append({"kind": "rotated", "delta": route.delta, "value": route.moment,
                             "series_rel_err": route.rel_err})
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    emit(render(rows, fmt, {"summary": summaries} if fmt == "json" else None), args.output)
    return EXIT_OK if all(s["cauchy_converging"] is not False for s in summaries) else EXIT_FAIL


# ---------------------------------------------------------------- eval

FUNCTIONS: dict[str, Callable[[complex], complex]] = {
    "psi1": psi1,
    "psi1_reference": lambda z: psi1(z, mode="reference"),
    "digamma": digamma,
    "trigamma": trigamma,
    "log_gamma": log_gamma,
    "zeta": zeta,
    "zeta_prime": zeta_prime,
    "kernel": sinhshi_minus_coshchi,
    "lambert_log": lambda y: lambert_log_lhs(LambertParams(y)),
}


def cmd_eval(args: argparse.Namespace) -> int:
    if args.function not in FUNCTIONS:
        raise ConfigError(f"unknown function {args.function!r}; known: {', '.join(FUNCTIONS)}")
    if not args.z:
        raise ConfigError("empty grid: give --z")
    fn = FUNCTIONS[args.function]
    points = [parse_complex(v) for v in args.z]
    try:
        values = [complex(fn(p)) for p in points]
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rows = [{"function": args.function, "arg": p, "value": v} for p, v in zip(points, values)]
    emit(render(rows, args.format or "json"), args.output)
    return EXIT_OK


# ---------------------------------------------------------------- report

def cmd_report(args: argparse.Namespace) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            records = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read report: {exc}") from None
    if isinstance(records, dict):
        records = records.get("rows", [])
    by_id: dict[str, list[dict[str, Any]]] = {}
    for r in records:
        by_id.setdefault(r.get("identity", "?"), []).append(r)
    rows = []
    for name, rs in by_id.items():
        errs = [r["abs_err"] for r in rs if r.get("abs_err") is not None]
        rels = [r["rel_err"] for r in rs if r.get("rel_err") is not None]
        rows.append({"identity": name, "paper_ref": rs[0].get("paper_ref"), "rows": len(rs),
                     "passed": sum(bool(r.get("pass")) for r in rs),
                     "max_abs_err": max(errs) if errs else None,
                     "max_rel_err": max(rels) if rels else None})
    emit(render(rows, args.format or "csv"), args.output)
    return EXIT_OK if all(r["passed"] == r["rows"] for r in rows) else EXIT_FAIL


# ---------------------------------------------------------------- argument parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    p.add_argument("--config", default=None, help="key = value file; flags take precedence")
    p.add_argument("--threads", type=int, default=None, help=f"worker count (default ${THREADS_ENV} or 1)")
    p.add_argument("--timing", action="store_const", const=True, default=None,
                   help="fill wall_ms (otherwise null, keeping reports reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lambertlog", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check identities at parameter points")
    _common(p)
    p.add_argument("--identity", action="append", help="identity name(s), comma separated")
    p.add_argument("--all", action="store_true", help="run every identity on its default grid")
    for name in ("y", "w", "z"):
        p.add_argument(f"--{name}", action="append", help="complex point re,im (repeatable)")
    for name in ("a", "alpha", "c", "m"):
        p.add_argument(f"--{name}", action="append", help="comma-separated real values")
    p.add_argument("--K", action="append", help="truncation order(s), e.g. 1..4")
    p.add_argument("--abs-tol", dest="abs_tol", type=float, default=None)
    p.add_argument("--rel-tol", dest="rel_tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--random", type=int, default=None, metavar="N",
                   help="replace the grid by N seeded random points per identity")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asympt", help="tabulate an asymptotic expansion against direct values")
    _common(p)
    p.add_argument("--target", required=True, help="thm1.2 (small y) or thm3.1 (psi_1, large z)")
    p.add_argument("--y", action="append")
    p.add_argument("--z", action="append")
    p.add_argument("--K", action="append")
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("moment", help="smoothed zeta moments and their residuals")
    _common(p)
    p.add_argument("--delta", action="append", help="comma-separated smoothing widths")
    p.add_argument("--calibrate", action="store_true", help="run and gate on the |zeta|^2 moment first")
    p.add_argument("--rotated", action="store_true", help="add the rotated Lambert-series route")
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("eval", help="evaluate a special function")
    _common(p)
    p.add_argument("function", help=", ".join(FUNCTIONS))
    p.add_argument("--z", action="append")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="summarize a JSON verify report")
    _common(p)
    p.add_argument("file")
    p.set_defaults(func=cmd_report)
    return parser


_VALUE_FLAGS = {"--y", "--w", "--z", "--a", "--alpha", "--c", "--m", "--delta"}


def _glue_negatives(argv: list[str]) -> list[str]:
    """Turn ``--y -1,0`` into ``--y=-1,0`` so argparse does not read a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else ""
        if tok in _VALUE_FLAGS and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negatives(list(sys.argv[1:] if argv is None else argv)))
    try:
        resolve_options(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"lambertlog: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
