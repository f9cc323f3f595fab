"""Exact Bernoulli numbers (convention B_1 = -1/2), cached."""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb

from ..errors import BudgetError

DEFAULT_CAP = 64

_lock = threading.Lock()
_table: list[Fraction] = [Fraction(1)]


def _extend(n: int) -> None:
    # sum_{k=0}^{m} C(m+1, k) B_k = 0
    with _lock:
        for m in range(len(_table), n + 1):
            acc = sum((comb(m + 1, k) * _table[k] for k in range(m)), Fraction(0))
            _table.append(-acc / (m + 1))


def bernoulli(n: int, cap: int = DEFAULT_CAP) -> Fraction:
    if n < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if n > cap:
        raise BudgetError(f"Bernoulli index {n} exceeds cap {cap}")
    if n >= len(_table):
        _extend(n)
    return _table[n]


def bernoulli_float(n: int, cap: int = DEFAULT_CAP) -> float:
    return float(bernoulli(n, cap))


def even_bernoulli_floats(kmax: int, cap: int = DEFAULT_CAP) -> list[float]:
    """``[B_2, B_4, ..., B_{2 kmax}]`` as binary64."""
    return [float(bernoulli(2 * k, cap)) for k in range(1, kmax + 1)]
