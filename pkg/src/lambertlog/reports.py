"""Result records shared by the identity checks and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


def complex_json(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity at one parameter point.

    ``passed`` holds exactly when ``abs_err <= abs_tol`` or ``rel_err <= rel_tol``.
    """

    identity: str
    paper_ref: str
    params: dict[str, Any]
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    abs_tol: float
    rel_tol: float
    passed: bool
    terms: dict[str, int] = field(default_factory=dict)
    evals: int = 0
    diagnostics: dict[str, float] = field(default_factory=dict)

    @classmethod
    def compare(cls, identity: str, paper_ref: str, params: dict[str, Any], lhs: complex,
                rhs: complex, abs_tol: float, rel_tol: float,
                terms: dict[str, int] | None = None, evals: int = 0,
                diagnostics: dict[str, float] | None = None) -> "IdentityReport":
        lhs, rhs = complex(lhs), complex(rhs)
        abs_err = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel_err = abs_err / scale if scale > 0 else (0.0 if abs_err == 0 else math.inf)
        passed = abs_err <= abs_tol or rel_err <= rel_tol
        return cls(identity, paper_ref, dict(params), lhs, rhs, abs_err, rel_err,
                   abs_tol, rel_tol, passed, dict(terms or {}), evals,
                   dict(diagnostics or {}))

    def as_record(self) -> dict[str, Any]:
        params = {k: (complex_json(v) if isinstance(v, complex) else v)
                  for k, v in self.params.items()}
        return {
            "identity": self.identity,
            "paper_ref": self.paper_ref,
            "params": params,
            "lhs": complex_json(self.lhs),
            "rhs": complex_json(self.rhs),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "pass": self.passed,
            "terms": dict(self.terms),
            "evals": self.evals,
            "diagnostics": dict(self.diagnostics),
        }
