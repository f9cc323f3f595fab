"""Divergent asymptotic series with optimal truncation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from ..errors import DomainError


@dataclass(frozen=True)
class TruncatedSum:
    value: complex
    first_omitted: float  # |term K+1|, the error proxy
    K: int
    optimal_K: int
    past_optimal: bool


@dataclass(frozen=True)
class AsymptoticSeries:
    """``leading(z) + sum_{k>=1} term(z, k)`` valid for ``|arg z| < sector``.

    ``max_index`` bounds k (for example by the Bernoulli-table cap).
    """

    leading: Callable[[complex], complex]
    term: Callable[[complex, int], complex]
    sector: float
    max_index: int

    def check(self, z: complex) -> None:
        if z == 0 or abs(cmath.phase(z)) >= self.sector:
            raise DomainError("argument outside the validity sector of the expansion")

    def terms(self, z: complex, K: int) -> list[complex]:
        return [self.term(z, k) for k in range(1, K + 1)]

    def optimal_index(self, z: complex) -> int:
        """argmin over ``1 <= k < max_index`` of ``|term(z, k)|`` (first minimum)."""
        self.check(z)
        best_k, best = 0, math.inf
        rising = 0
        for k in range(1, self.max_index):
            t = abs(self.term(z, k))
            if t < best:
                best_k, best = k, t
                rising = 0
            else:
                rising += 1
                if rising >= 3:
                    break
        return best_k

    def partial_sum(self, z: complex, K: int) -> TruncatedSum:
        self.check(z)
        if K < 0 or K >= self.max_index:
            raise ValueError(f"K must lie in 0..{self.max_index - 1}")
        parts = [self.leading(z)] + self.terms(z, K)
        value = complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
        k_opt = self.optimal_index(z)
        return TruncatedSum(value, abs(self.term(z, K + 1)), K, k_opt, K > k_opt)

    def evaluate(self, z: complex, rel: float = 2.0**-60) -> complex:
        """Sum until the terms drop below ``rel`` times the running value or start growing."""
        self.check(z)
        total = self.leading(z)
        parts = [total]
        prev = math.inf
        for k in range(1, self.max_index):
            t = self.term(z, k)
            at = abs(t)
            if at > prev:
                break
            parts.append(t)
            prev = at
            if at < rel * abs(total):
                break
        return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))
