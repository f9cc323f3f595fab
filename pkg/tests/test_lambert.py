import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lambertlog.errors import CancellationError, DomainError
from lambertlog.lambert import (LambertParams, asymptotic_logy0, digamma_bracket, divisor_counts,
                                divisor_sigmas, lambert_log_alt_check, lambert_log_check,
                                lambert_log_lhs, lambert_log_lhs_divisor, lambert_log_lhs_extended,
                                lambert_log_rhs, logy0_coefficient, maineqn_bracket, maineqn_check,
                                maineqn_lhs, maineqn_rhs, psi1_bracket, ramanujan_bernoulli_block,
                                ramanujan_check, wigert_check)
from lambertlog.numerics import Tolerance, bernoulli
from lambertlog.special import EULER_GAMMA
from lambertlog.suite import loglog_slope

# mpmath oracle values of sum log(n)/(e^{ny} - 1)
LOG_LAMBERT = {1: 0.21020138874368403938, 0.5: 1.3396333723784622003,
               3 + 2j: -0.00099509784686530492652 + 0.0013258308678838626994j,
               0.3 + 0.2j: 0.93720184759872146702 - 2.9250250042285951392j,
               2 + 1j: -0.0083920991649906318664 - 0.011325616421382901195j,
               0.05: 102.40289996763157655}
LOG_LAMBERT_AT_10 = 1.4287856349245820663e-9
WIGERT_LHS_AT_1 = 0.82025951154241682326
ZETA_3 = 1.2020569031595942854

GRID_10 = [1, 0.5, 3 + 2j, 0.3 + 0.2j, 0.05, 2 + 1j, 5, 0.1 + 0.5j, 4 - 3j, 1 + 4j]

sector_y = st.builds(complex, st.floats(0.2, 4.0), st.floats(-2.0, 2.0))


# ---------------------------------------------------------------- parameters

def test_params_reject_left_half_plane():
    with pytest.raises(DomainError):
        LambertParams(-1 + 0j)
    with pytest.raises(DomainError):
        LambertParams(2j)


def test_sector_check_for_small_y_expansion():
    with pytest.raises(DomainError):
        asymptotic_logy0(-1 + 1j, 2)


def test_divisor_tables_against_brute_force():
    d = divisor_counts(60)
    s = divisor_sigmas(0.5, 60)
    for n in range(1, 61):
        divs = [k for k in range(1, n + 1) if n % k == 0]
        assert d[n] == len(divs)
        assert abs(s[n] - math.fsum(k**0.5 for k in divs)) <= 1e-13 * s[n]


# ---------------------------------------------------------------- the direct sum

def test_lhs_at_ten_against_mpmath():
    v = lambert_log_lhs(LambertParams(10.0))
    assert abs(v - LOG_LAMBERT_AT_10) <= 1e-15 * LOG_LAMBERT_AT_10


def test_lhs_at_ten_matches_fifty_term_brute_force():
    brute = math.fsum(math.log(n) * math.exp(-10 * n * k) for n in range(2, 51) for k in range(1, 6))
    assert abs(lambert_log_lhs(LambertParams(10.0)) - brute) <= 1e-15 * brute


@pytest.mark.parametrize("y", [0.05, 0.7, 3.0, 10.0])
def test_lhs_real_and_positive_for_real_y(y):
    v = lambert_log_lhs(LambertParams(y))
    assert v.imag == 0 and v.real > 0


@pytest.mark.parametrize("y", list(LOG_LAMBERT))
def test_lhs_against_mpmath(y):
    assert abs(lambert_log_lhs(LambertParams(y)) - LOG_LAMBERT[y]) <= 1e-12 * abs(LOG_LAMBERT[y])


@pytest.mark.parametrize("y", [1.0, 2.0, 0.5])
def test_divisor_form_equals_lambert_form(y):
    a = lambert_log_lhs(LambertParams(y))
    b = lambert_log_lhs_divisor(LambertParams(y))
    assert abs(a - b) <= 1e-12 * abs(a)


def test_extended_lhs_agrees_with_binary64():
    for y in (0.05, 0.5, 2.0):
        assert abs(float(lambert_log_lhs_extended(y)) - lambert_log_lhs(LambertParams(y)).real) \
            <= 1e-14 * abs(LOG_LAMBERT.get(y, 1.0)) + 1e-15


# ---------------------------------------------------------------- the transformed side

def test_rhs_matches_lhs_at_one():
    assert abs(lambert_log_rhs(LambertParams(1.0)) - LOG_LAMBERT[1]) <= 1e-9 * LOG_LAMBERT[1]


def test_psi1_bracket_at_two_pi_is_finite_and_real():
    v = psi1_bracket(1, 2 * math.pi)
    assert cmath.isfinite(v) and v.imag == 0


def _psi1_mp(a, nodes=48):
    # psi_1(a) = -gamma_1(a), the Laurent coefficient of zeta(s, a) at s = 1,
    # taken as a trapezoid Cauchy integral on |s - 1| = 1/2
    r = mpmath.mpf(1) / 2
    acc = 0
    for k in range(nodes):
        e = mpmath.expjpi(mpmath.mpf(2 * k) / nodes)
        s = 1 + r * e
        acc += (mpmath.zeta(s, a) - 1 / (s - 1)) / e
    return acc / (nodes * r)


def test_psi1_bracket_against_mpmath():
    mpmath.mp.dps = 30
    try:
        expect = _psi1_mp(1j) + _psi1_mp(-1j) \
            - (mpmath.log(1j) ** 2 + mpmath.log(-1j) ** 2) / 2 + mpmath.pi / 2
        got = psi1_bracket(1, 2 * math.pi)
        assert abs(got - complex(expect)) <= 1e-13
    finally:
        mpmath.mp.dps = 15


def test_digamma_bracket_large_n_scale():
    y = 8.0
    for n in (100, 1000):
        ratio = n * n * digamma_bracket(n, y) / (-y * y / (48 * math.pi**2))
        assert abs(ratio - 1) <= 2.0 / n**2 + 1e-6


@pytest.mark.parametrize("y", GRID_10)
def test_dual_route_equality_on_ten_points(y):
    p = LambertParams(y)
    lhs = lambert_log_lhs(p)
    rhs = lambert_log_rhs(p)
    assert abs(lhs - rhs) <= 1e-9 * abs(lhs)
    assert lambert_log_check(p).passed


def test_alt_form_at_one():
    r = lambert_log_alt_check(LambertParams(1.0, Tolerance(1e-300, 1e-9)))
    assert r.passed and r.rel_err <= 1e-9


def test_alt_form_at_two_plus_i():
    r = lambert_log_alt_check(LambertParams(2 + 1j, Tolerance(1e-300, 1e-8)))
    assert r.passed and r.rel_err <= 1e-8


def test_alt_form_rhs_is_real_for_real_y():
    assert lambert_log_alt_check(LambertParams(1.5)).rhs.imag == 0
    assert all(psi1_bracket(n, 1.5).imag == 0 for n in range(1, 6))


@settings(max_examples=15)
@given(sector_y)
def test_alt_form_and_wigert_pass_together(y):
    alt = lambert_log_alt_check(LambertParams(y, Tolerance(1e-300, 1e-8)))
    wig = wigert_check(LambertParams(y, Tolerance(1e-300, 1e-10)))
    main = lambert_log_check(LambertParams(y))
    assert alt.passed and wig.passed and main.passed


# ---------------------------------------------------------------- Wigert

def test_wigert_at_one():
    r = wigert_check(LambertParams(1.0, Tolerance(1e-300, 1e-10)))
    assert abs(r.lhs - WIGERT_LHS_AT_1) <= 1e-14
    brute = math.fsum(1 / math.expm1(n) for n in range(1, 61))
    assert abs(r.lhs - brute) <= 1e-15
    assert r.passed


def test_wigert_at_two_pi():
    y = 2 * math.pi
    r = wigert_check(LambertParams(y, Tolerance(1e-300, 1e-10)))
    assert abs(r.lhs - math.fsum(1 / math.expm1(n * y) for n in range(1, 10))) <= 1e-17
    # x_n = n at y = 2 pi, so the brackets sit at integer multiples of i
    assert abs(digamma_bracket(1, y) - (-0.5 * (complex(mpmath.digamma(1j)) + complex(mpmath.digamma(-1j))))) <= 1e-15
    assert r.passed


def test_wigert_at_five_plus_3i():
    assert wigert_check(LambertParams(5 + 3j, Tolerance(1e-300, 1e-10))).passed


# ---------------------------------------------------------------- Ramanujan

def test_ramanujan_symmetric_point():
    r = ramanujan_check(1, math.pi)
    assert r.passed and r.rel_err <= 1e-10
    inner = math.fsum(n**-3 / math.expm1(2 * math.pi * n) for n in range(1, 30))
    assert abs(r.lhs - (0.5 * ZETA_3 + inner) / math.pi) <= 1e-15


@pytest.mark.parametrize("m,alpha", [(2, math.pi / 2), (1, 1.0), (3, 0.7), (-1, 1.3), (-2, 2.0)])
def test_ramanujan_other_points(m, alpha):
    assert ramanujan_check(m, alpha).passed


def test_ramanujan_bernoulli_block_at_m1():
    alpha, beta = 1.3, math.pi**2 / 1.3
    b0, b2, b4 = 1.0, 1 / 6, -1 / 30
    expect = (b0 * b4 * alpha**2 / 24 - b2 * b2 * alpha * beta / 4 + b4 * b0 * beta**2 / 24)
    assert abs(ramanujan_bernoulli_block(1, alpha, beta) - expect) <= 1e-15


def test_ramanujan_rejects_m_zero():
    with pytest.raises(DomainError):
        ramanujan_check(0, 1.0)


# ---------------------------------------------------------------- the sigma_a transformation

def test_maineqn_at_half_and_eight():
    r = maineqn_check(0.5, LambertParams(8.0))
    assert r.passed and r.rel_err <= 1e-6


def test_maineqn_at_three_halves_and_eight():
    assert maineqn_check(1.5, LambertParams(8.0)).rel_err <= 1e-6


def test_maineqn_a_to_zero_is_wigert():
    y = 2.0
    wigert_rest = math.fsum(1 / math.expm1(n * y) for n in range(1, 40)) - 0.25 \
        - (EULER_GAMMA - math.log(y)) / y
    for a in (1e-4, -1e-4):
        lhs, _ = maineqn_lhs(a, y)
        assert abs(lhs - wigert_rest) <= 1e-5


def test_maineqn_brackets_fall_off_at_eight():
    sizes = [abs(float(maineqn_bracket(0.5, 8.0, n))) for n in range(1, 6)]
    assert all(b < a for a, b in zip(sizes, sizes[1:]))


def test_maineqn_refuses_past_cancellation_budget():
    with pytest.raises(CancellationError) as info:
        maineqn_rhs(0.5, 8.0, n_direct=12)
    assert info.value.n == 9
    assert "n = 9" in str(info.value)


def test_maineqn_rejects_even_a_and_complex_y():
    with pytest.raises(DomainError):
        maineqn_check(2.0, LambertParams(8.0))
    with pytest.raises(DomainError):
        maineqn_check(0.5, LambertParams(8 + 1j))


# ---------------------------------------------------------------- the small-y expansion

def test_logy0_at_y005_k3():
    y = 0.05
    a = asymptotic_logy0(y, 3, extended=True)
    diff = abs(float(lambert_log_lhs_extended(y) - a.value))
    assert diff <= 10 * abs(a.next_term)


def test_logy0_k1_block_is_four_terms():
    y = 0.3
    g = EULER_GAMMA
    ly = math.log(y)
    log_a = float(mpmath.log(mpmath.glaisher))
    four = [ly * ly / (2 * y), (math.pi**2 / 12 - g * g / 2) / y, -0.25 * math.log(2 * math.pi),
            y / 12 * (log_a - 1 / 12)]
    assert abs(asymptotic_logy0(y, 1).value - math.fsum(four)) <= 1e-14


def test_logy0_k2_coefficient_against_mpmath():
    mpmath.mp.dps = 30
    try:
        b4 = mpmath.bernoulli(4)
        inner = b4 / (2 * mpmath.factorial(4)) * (mpmath.euler - (1 + mpmath.mpf(1) / 2 + mpmath.mpf(1) / 3)
                                                  + mpmath.log(2 * mpmath.pi))
        inner += mpmath.zeta(4, derivative=1) / (2 * mpmath.pi) ** 4
        expect = float(b4 / 2 * inner)
    finally:
        mpmath.mp.dps = 15
    assert bernoulli(4) == Fraction(-1, 30)
    assert abs(logy0_coefficient(2) - expect) <= 1e-16 * max(1, abs(expect)) + 1e-20


@pytest.mark.parametrize("K", [1, 2, 3])
def test_logy0_error_slope(K):
    ys = [0.2 * 2.0**-j for j in range(5)]
    errs = [abs(float(lambert_log_lhs_extended(y) - asymptotic_logy0(y, K, extended=True).value))
            for y in ys]
    slope = loglog_slope(ys, errs)
    assert abs(slope - (2 * K + 1)) <= 0.15 * (2 * K + 1)


def test_logy0_complex_argument_tracks_direct_sum():
    y = 0.1 + 0.05j
    a = asymptotic_logy0(y, 3)
    assert abs(lambert_log_lhs(LambertParams(y)) - a.value) <= 10 * abs(a.next_term) + 1e-12


def test_logy0_rejects_k0():
    with pytest.raises(DomainError):
        asymptotic_logy0(0.1, 0)


def test_divisor_table_is_numpy():
    assert isinstance(divisor_counts(10), np.ndarray)
