import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from lambertlog.errors import BudgetError, NonConvergenceError
from lambertlog.numerics import (ExtendedValue, Tolerance, bernoulli, compensated_sum,
                                 integrate_adaptive, integrate_oscillatory, two_prod, two_sum)
from lambertlog.numerics.doubleword import accumulate, dw_exp, dw_log
from lambertlog.numerics.summation import neumaier_total
from lambertlog.special.expint import sinhshi_minus_coshchi

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e150, max_value=1e150)


# ---------------------------------------------------------------- Bernoulli numbers

def test_bernoulli_b1_is_minus_half():
    assert bernoulli(1) == Fraction(-1, 2)


def test_bernoulli_odd_index_vanishes():
    assert bernoulli(3) == 0
    assert all(bernoulli(n) == 0 for n in range(3, 40, 2))


def test_bernoulli_b2_is_one_sixth():
    assert bernoulli(2) == Fraction(1, 6)


def test_bernoulli_recurrence_holds():
    for n in range(1, 30):
        assert sum(math.comb(n + 1, k) * bernoulli(k) for k in range(n + 1)) == 0


def test_bernoulli_cap_is_enforced():
    with pytest.raises(BudgetError):
        bernoulli(66)


# ---------------------------------------------------------------- compensated summation

def test_geometric_series_sums_to_two():
    r = compensated_sum((0.5**k for k in range(200)), Tolerance(1e-17, 1e-17))
    assert abs(r.value - 2) <= 1e-15


def test_zero_series_stops_after_three_terms():
    r = compensated_sum(iter([0.0] * 10), Tolerance(1e-15, 1e-15))
    assert r.value == 0 and r.terms_used == 3


def test_telescoping_series_sums_to_one():
    r = compensated_sum((1 / (k * (k + 1)) for k in itertools.count(1)),
                        Tolerance(1e-12, 1e-12, max_terms=2_000_000))
    n = r.terms_used
    # the partial sum telescopes to 1 - 1/(n+1); the rest is the unsummed tail
    assert abs(r.value - (1 - 1 / (n + 1))) <= 1e-12
    assert abs(r.value - 1) <= 1 / (n + 1) + 1e-12


def test_budget_exhaustion_raises_with_partial():
    with pytest.raises(NonConvergenceError) as info:
        compensated_sum((1.0 / k for k in range(1, 10**6)), Tolerance(1e-12, 1e-12, max_terms=100))
    assert info.value.partial == pytest.approx(math.fsum(1.0 / k for k in range(1, 101)))


def test_compensated_sum_matches_256_bit_oracle():
    rng = np.random.default_rng(2024)
    mpmath.mp.prec = 256
    try:
        for _ in range(100):
            ratio = rng.uniform(-0.95, 0.95)
            n = int(rng.integers(20, 400))
            terms = [float(rng.uniform(0.5, 2.0) * ratio**k) for k in range(n)]
            got = neumaier_total(terms)
            exact = mpmath.fsum(mpmath.mpf(t) for t in terms)
            assert abs(mpmath.mpf(got) - exact) <= 4 * math.ulp(float(exact))
    finally:
        mpmath.mp.prec = 53


# ---------------------------------------------------------------- quadrature

def test_sine_over_half_period():
    r = integrate_adaptive(np.sin, 0.0, math.pi)
    assert r.converged and abs(r.value - 2) <= 1e-14


def test_exponential_on_half_line():
    r = integrate_adaptive(lambda t: np.exp(-t), 0.0, math.inf)
    assert r.converged and abs(r.value - 1) <= 1e-14


def test_u_sin_u_over_u2_plus_1():
    r = integrate_oscillatory(lambda u: u / (u * u + 1), kind="sin")
    assert r.converged and abs(r.value - math.pi / (2 * math.e)) <= 1e-13


def test_cos_over_1_plus_u2_residue_value():
    r = integrate_oscillatory(lambda u: 1 / (1 + u * u))
    assert abs(r.value - math.pi / (2 * math.e)) <= 1e-13


def test_u_cos_u_over_u2_plus_1_is_shi_chi_kernel():
    r = integrate_oscillatory(lambda u: u / (u * u + 1), Tolerance(1e-12, 1e-12))
    assert abs(r.value - sinhshi_minus_coshchi(1.0)) <= 1e-10
    assert abs(r.value - (-0.050413760455935997212)) <= 1e-10  # mpmath


def test_zero_integrand_gives_zero():
    r = integrate_oscillatory(lambda u: 0 * u)
    assert r.value == 0


@pytest.mark.parametrize("w", [0.5, 1.0, 2.0, 1 + 1j])
def test_oscillatory_reproduces_kernel_closed_form(w):
    w2 = complex(w) ** 2
    r = integrate_oscillatory(lambda u: u / (u * u + w2), Tolerance(1e-12, 1e-12))
    assert abs(r.value - sinhshi_minus_coshchi(w)) <= 1e-8


CLOSED_FORMS = [
    (lambda t: np.exp(-t), 0, 3, 1 - math.exp(-3)),
    (np.cos, 0, 2, math.sin(2)),
    (lambda t: t**3, 0, 1, 0.25),
    (lambda t: 1 / (1 + t * t), 0, 1, math.pi / 4),
    (lambda t: np.sqrt(t), 0, 1, 2 / 3),
    (lambda t: np.log1p(t), 0, 1, 2 * math.log(2) - 1),
    (lambda t: np.exp(-t * t), 0, math.inf, math.sqrt(math.pi) / 2),
    (lambda t: 1 / (1 + t * t), 0, math.inf, math.pi / 2),
    (lambda t: t * np.exp(-t), 0, math.inf, 1.0),
    (lambda t: np.sin(t) ** 2, 0, math.pi, math.pi / 2),
    (lambda t: np.exp(t), -1, 1, math.e - 1 / math.e),
    (lambda t: 1 / t, 1, math.e, 1.0),
    (lambda t: np.cosh(t), 0, 1, math.sinh(1)),
    (lambda t: t**5 - t, -1, 2, (64 - 1) / 6 - 1.5),
    (lambda t: np.exp(-2 * t) * np.cos(t), 0, math.inf, 0.4),
    (lambda t: 1 / (1 + t) ** 2, 0, math.inf, 1.0),
    (lambda t: np.sin(5 * t), 0, math.pi / 5, 0.4),
    (lambda t: t * t * np.exp(-t), 0, math.inf, 2.0),
    (lambda t: 1 / (4 + t * t), 0, 2, math.pi / 8),
    (lambda t: np.exp(-t) * np.sin(t), 0, math.inf, 0.5),
]


def test_error_estimate_covers_true_error():
    covered = 0
    for f, a, b, exact in CLOSED_FORMS:
        r = integrate_adaptive(f, float(a), float(b), Tolerance(1e-10, 1e-10))
        covered += abs(r.value - exact) <= r.err_estimate + 1e-16
    assert covered >= 0.95 * len(CLOSED_FORMS)


# ---------------------------------------------------------------- double-word

def test_two_sum_keeps_tiny_addend():
    assert two_sum(1.0, 2.0**-60) == (1.0, 2.0**-60)


def test_two_prod_exact_product():
    hi, lo = two_prod(1 + 2.0**-30, 1 - 2.0**-30)
    assert Fraction(hi) + Fraction(lo) == 1 - Fraction(1, 2**60)
    assert (hi, lo) == (1.0, -(2.0**-60))


def test_ten_thousand_tenths_against_rational_oracle():
    got = accumulate([0.1] * 10**4).to_fraction()
    exact = Fraction(0.1) * 10**4
    assert abs(got - exact) / exact < Fraction(1, 10**26)


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@given(st.floats(min_value=-1e100, max_value=1e100, allow_nan=False),
       st.floats(min_value=-1e100, max_value=1e100, allow_nan=False))
def test_two_prod_is_error_free(a, b):
    assume(a == 0 or b == 0 or abs(a * b) >= 1e-200)  # otherwise the low word underflows
    p, e = two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_error_free_transformations_on_a_million_pairs():
    rng = np.random.default_rng(7)
    a = (rng.standard_normal(10**6) * np.exp(rng.uniform(-20, 20, 10**6))).tolist()
    b = (rng.standard_normal(10**6) * np.exp(rng.uniform(-20, 20, 10**6))).tolist()
    for x, y in zip(a, b):
        s, e = two_sum(x, y)
        assert math.fsum([s, e, -x, -y]) == 0  # fsum is exact here, so zero means exact
        p, q = two_prod(x, y)
        nx, dx = x.as_integer_ratio()
        ny, dy = y.as_integer_ratio()
        n1, d1 = p.as_integer_ratio()
        n2, d2 = q.as_integer_ratio()
        assert (n1 * d2 + n2 * d1) * dx * dy == nx * ny * d1 * d2


def test_double_word_exp_log_round_trip():
    mpmath.mp.dps = 40
    try:
        for x in (0.5, 1.0, 3.25, 10.0, -7.5):
            v = dw_exp(ExtendedValue(x))
            exact = mpmath.exp(mpmath.mpf(x))
            assert abs((mpmath.mpf(v.hi) + mpmath.mpf(v.lo)) / exact - 1) < 1e-30
            back = dw_log(v)
            assert abs(float(back - x)) < 1e-30 * max(1, abs(x))
    finally:
        mpmath.mp.dps = 15
