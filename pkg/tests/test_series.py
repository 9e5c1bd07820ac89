from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from wallis_cf.numerics import EvalContext, ln, rational_to_ball, working_precision
from wallis_cf.series import (
    LaurentSeries,
    SeriesError,
    cf_value,
    linear_poly,
    series_add,
    series_cf_term,
    series_inv_linear,
    series_inverse,
    series_log_ratio,
    series_mul,
    series_scale,
    series_shift,
    series_stirling_factor,
    series_sub,
    _binom,
)

x = sp.Symbol("x", positive=True)  # x = 1/n


def sympy_coeffs(expr_in_n, order):
    """Oracle: coefficients {exponent of n: value} of an expression of n, via x = 1/n."""
    ser = sp.expand(sp.series(expr_in_n(1 / x), x, 0, order + 1).removeO())
    out = {}
    for k in range(-3, order + 1):
        c = ser.as_independent(x)[0] if k == 0 else ser.coeff(x, k)
        if c != 0:
            out[-k] = Fraction(int(sp.numer(c)), int(sp.denom(c)))
    return out


def poly(terms, order=30):
    return LaurentSeries.from_terms(terms, order)


def test_add_two_reciprocals():
    a = poly({-1: 1}, 5)
    assert (a + a).terms() == {-1: 2}


def test_scale_by_zero_gives_zero():
    s = series_stirling_factor(Fraction(1, 3), 6)
    assert series_scale(0, s).valuation() is None


def test_sub():
    assert series_sub(poly({-1: 1, -2: -1}, 5), poly({-1: 1}, 5)).terms() == {-2: -1}


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ({-1: 1}, {-1: 1}, {-2: 1}),
        ({0: 1, -1: 1}, {0: 1, -1: -1}, {0: 1, -2: -1}),
        ({1: 1}, {-1: 1}, {0: 1}),
    ],
)
def test_mul_examples(a, b, expected):
    assert series_mul(poly(a, 6), poly(b, 6)).terms() == expected


def test_mul_drops_coefficients_touched_by_tails():
    # n * (1/n + O(n^-4)) is only known through n^-3
    p = series_mul(poly({1: 1}, 10), poly({-1: 1}, 4))
    assert p.order == 3


def test_inv_linear_geometric():
    s = series_inv_linear(Fraction(1, 3), 5)
    assert [s.coeff(-k) for k in range(1, 6)] == [Fraction(-1, 3) ** (k - 1) for k in range(1, 6)]
    assert series_inv_linear(0, 5).terms() == {-1: 1}


def test_inv_linear_round_trip():
    c = Fraction(-4309, 109340)
    s = series_inv_linear(c, 4)
    assert [s.coeff(-k) for k in (1, 2, 3)] == [1, -c, c * c]
    back = series_mul(linear_poly(c, 10), s)
    assert back.agrees_with(LaurentSeries.constant(1, back.order))
    assert back.order == 3


def test_log_ratio_examples():
    assert series_log_ratio(0, 0, 5).valuation() is None
    mercator = series_log_ratio(1, 0, 6)
    assert [mercator.coeff(-k) for k in range(1, 7)] == [Fraction((-1) ** (k + 1), k) for k in range(1, 7)]


def test_log_ratio_from_two_mercator_series():
    # ln(1 + 1/n) - ln(1 + 1/(2n)) term by term
    s = series_log_ratio(1, Fraction(1, 2), 8)
    for k in range(1, 9):
        brute = Fraction((-1) ** (k + 1), k) * (1 - Fraction(1, 2) ** k)
        assert s.coeff(-k) == brute
    assert [s.coeff(-k) for k in (1, 2, 3)] == [Fraction(1, 2), Fraction(-3, 8), Fraction(7, 24)]


def test_stirling_factor_c0():
    s = series_stirling_factor(0, 6)
    assert [s.coeff(0), s.coeff(-1), s.coeff(-2)] == [Fraction(-1, 2), Fraction(-1, 8), Fraction(-1, 24)]


@pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(4, 3), Fraction(-2, 7)])
def test_stirling_factor_constant_term(c):
    assert series_stirling_factor(c, 5).coeff(0) == Fraction(-1, 2)


@pytest.mark.parametrize("c", [Fraction(1, 3), Fraction(4, 3)])
def test_stirling_factor_by_composition(c):
    # (n + c) * sum_j -(1/(2(n+c)))^j / j, with 1/(n+c) from the geometric series
    order = 9
    inv = series_inv_linear(c, order + 1)
    log = LaurentSeries.zero(order + 1)
    power = LaurentSeries.constant(1, order + 1)
    for j in range(1, order + 2):
        power = series_mul(power, series_scale(Fraction(1, 2), inv)).truncate(order + 1)
        log = log - series_scale(Fraction(1, j), power)
    composed = series_mul(linear_poly(c, order + 5), log)
    assert composed.truncate(order).agrees_with(series_stirling_factor(c, order))


def test_stirling_factor_against_sympy():
    order = 7
    c = sp.Rational(1, 3)
    oracle = sympy_coeffs(lambda n: (n + c) * sp.log(1 - 1 / (2 * (n + c))), order)
    s = series_stirling_factor(Fraction(1, 3), order)
    assert s.terms() == oracle


def test_shift_examples():
    s = series_shift(poly({-1: 1}, 5))
    assert [s.coeff(-k) for k in range(1, 6)] == [1, -1, 1, -1, 1]
    assert series_shift(LaurentSeries.constant(7, 5)).terms() == {0: 7}
    s2 = series_shift(poly({-2: 1}, 6))
    assert [s2.coeff(-k) for k in range(2, 7)] == [1, -2, 3, -4, 5]


def test_shift_of_polynomial_part():
    assert series_shift(poly({1: 1, 0: 2}, 4)).terms() == {1: 1, 0: 3}


def test_cf_term_depth_one():
    s = series_cf_term([(Fraction(1, 144), Fraction(1, 60))], 6)
    assert s.coeff(-3) == Fraction(1, 144)
    assert s.coeff(-4) == -Fraction(1, 144) * Fraction(1, 60) == Fraction(-1, 8640)
    assert series_cf_term([(1, 0)], 6).terms() == {-3: 1}


def test_cf_term_leading_coefficient_any_depth():
    pairs = [(Fraction(2, 3), Fraction(1, 5)), (Fraction(-1, 7), 3), (Fraction(5, 2), Fraction(-1, 2))]
    for d in range(1, 4):
        assert series_cf_term(pairs[:d], 8).coeff(-3) == Fraction(2, 3)


def test_cf_term_rejects_zero_numerator():
    with pytest.raises(SeriesError):
        series_cf_term([(0, 1)], 6)
    with pytest.raises(SeriesError):
        series_cf_term([], 6)


def _convergent(pairs):
    """Oracle: the continued fraction as P(n)/Q(n), polynomials as {exponent: coeff}."""

    def pmul(p, q):
        out = {}
        for e1, c1 in p.items():
            for e2, c2 in q.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return out

    def padd(p, q):
        out = dict(p)
        for e, c in q.items():
            out[e] = out.get(e, 0) + c
        return out

    a, b = pairs[-1]
    num, den = {0: Fraction(a)}, {1: Fraction(1), 0: Fraction(b)}
    for a, b in reversed(pairs[:-1]):
        num, den = pmul({0: Fraction(a)}, den), padd(pmul({1: Fraction(1), 0: Fraction(b)}, den), num)
    return num, den


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_cf_term_inversion_round_trip(depth):
    pairs = [(Fraction(1, 144), Fraction(1, 60)), (Fraction(781, 3600), Fraction(-4309, 109340)),
             (Fraction(51396085, 89664267), Fraction(25682346121, 449571834712))][:depth]
    order = 14
    s = series_cf_term(pairs, order)
    num, den = _convergent(pairs)
    # s * n^2 * Q(n) == P(n)
    q_series = LaurentSeries.from_terms({e + 2: c for e, c in den.items()}, order + 10)
    prod = series_mul(s, q_series)
    assert prod.agrees_with(LaurentSeries.from_terms(num, prod.order))
    assert prod.order >= order - depth - 2


def test_series_inverse_errors():
    with pytest.raises(SeriesError):
        series_inverse(LaurentSeries.zero(4))


def test_coeff_below_truncation_raises():
    with pytest.raises(IndexError):
        series_inv_linear(1, 3).coeff(-4)


def test_numerical_consistency_at_large_n():
    ctx = EvalContext(60)
    n = 10**6
    order = 10
    s = series_stirling_factor(Fraction(1, 3), order)
    m = n + Fraction(1, 3)
    with working_precision(ctx):
        closed = m * ln(1 - 1 / (2 * m), ctx)
        diff = closed - rational_to_ball(s.evaluate(Fraction(n)), ctx)
    # tail is O(n^-11)
    assert abs(diff.center_fraction()) <= diff.radius_fraction() + Fraction(1, n**11)


def test_cf_term_matches_exact_value_at_large_n():
    pairs = [(Fraction(1, 144), Fraction(1, 60)), (Fraction(781, 3600), Fraction(-4309, 109340))]
    s = series_cf_term(pairs, 12)
    n = Fraction(10**4)
    assert abs(s.evaluate(n) - cf_value(pairs, n)) < n ** -12


# --- randomized algebraic laws ------------------------------------------------------

small_frac = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series_st(draw):
    top = draw(st.integers(0, 2))
    order = draw(st.integers(1, 6))
    coeffs = draw(st.lists(small_frac, min_size=top + order + 1, max_size=top + order + 1))
    return LaurentSeries(top, tuple(coeffs))


def ring_laws_hold(a, b, c):
    try:
        ab_c = series_mul(series_mul(a, b), c)
        a_bc = series_mul(a, series_mul(b, c))
    except SeriesError:
        return True  # truncation left nothing to compare
    ok = ab_c.agrees_with(a_bc)
    ok &= series_mul(a, b).agrees_with(series_mul(b, a))
    ok &= series_add(series_add(a, b), c).agrees_with(series_add(a, series_add(b, c)))
    ok &= series_add(a, b).agrees_with(series_add(b, a))
    try:
        ok &= series_mul(a, series_add(b, c)).agrees_with(series_add(series_mul(a, b), series_mul(a, c)))
    except SeriesError:
        pass
    return ok


@settings(max_examples=300, deadline=None)
@given(series_st(), series_st(), series_st())
def test_ring_laws(a, b, c):
    assert ring_laws_hold(a, b, c)


@settings(max_examples=300, deadline=None)
@given(small_frac, st.integers(2, 10))
def test_inv_linear_inversion_property(c, order):
    back = series_mul(linear_poly(c, order + 2), series_inv_linear(c, order))
    assert back.agrees_with(LaurentSeries.constant(1, back.order))


@settings(max_examples=200, deadline=None)
@given(series_st())
def test_shift_is_ring_homomorphism(a):
    sq = series_mul(a, a) if a.top == 0 else None
    if sq is not None:
        assert series_shift(sq).agrees_with(series_mul(series_shift(a), series_shift(a)))
    inv_shift = series_shift(series_shift(a))
    # two unit shifts equal one shift by 2: n^-1 -> 1/(n + 2)
    direct = {}
    for e, coef in a.terms().items():
        for t in range(0, 20):
            if e - t < -a.order:
                break
            direct[e - t] = direct.get(e - t, 0) + coef * _binom(e, t) * 2**t
    assert inv_shift.agrees_with(LaurentSeries.from_terms(direct, a.order))
