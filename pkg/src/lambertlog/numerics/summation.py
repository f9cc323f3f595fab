from __future__ import annotations

from typing import Iterable, NamedTuple

from ..errors import NonConvergenceError
from .types import Tolerance


class SumResult(NamedTuple):
    value: complex | float
    terms_used: int


class NeumaierAccumulator:
    """Kahan-Neumaier compensated running sum (real or complex)."""

    __slots__ = ("_s_re", "_c_re", "_s_im", "_c_im", "_complex")

    def __init__(self) -> None:
        self._s_re = self._c_re = 0.0
        self._s_im = self._c_im = 0.0
        self._complex = False

    @staticmethod
    def _step(s: float, c: float, x: float) -> tuple[float, float]:
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        return t, c

    def add(self, x: complex | float) -> None:
        if isinstance(x, complex):
            self._complex = True
            self._s_re, self._c_re = self._step(self._s_re, self._c_re, x.real)
            self._s_im, self._c_im = self._step(self._s_im, self._c_im, x.imag)
        else:
            self._s_re, self._c_re = self._step(self._s_re, self._c_re, float(x))

    @property
    def value(self) -> complex | float:
        re = self._s_re + self._c_re
        if self._complex:
            return complex(re, self._s_im + self._c_im)
        return re


def compensated_sum(terms: Iterable[complex | float], tol: Tolerance,
                    quiet_run: int = 3) -> SumResult:
    """Sum terms in order until ``quiet_run`` consecutive terms fall below tolerance.

    A term is "below tolerance" when ``|term| <= max(abs_tol, rel_tol*|running sum|)``.
    Raises :class:`NonConvergenceError` if ``tol.max_terms`` terms are used first
    (or the generator ends before the stopping rule fires).
    """
    acc = NeumaierAccumulator()
    quiet = 0
    used = 0
    for term in terms:
        used += 1
        acc.add(term)
        if abs(term) <= tol.target(abs(acc.value)):
            quiet += 1
            if quiet >= quiet_run:
                return SumResult(acc.value, used)
        else:
            quiet = 0
        if used >= tol.max_terms:
            break
    raise NonConvergenceError(
        f"series did not meet tolerance within {used} terms", partial=acc.value, terms_used=used)


def neumaier_total(values: Iterable[complex | float]) -> complex | float:
    """Compensated sum of a finite sequence (no stopping rule)."""
    acc = NeumaierAccumulator()
    for v in values:
        acc.add(v)
    return acc.value
