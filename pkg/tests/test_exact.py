from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa.errors import CoefficientModeError, ZeroSeries
from igusa.exact import LaurentSeries, RatFunc, UniPoly, laurent_inv, laurent_mul, ratfunc_expand

s = UniPoly.x()
rats = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def series(min_exp, coeffs, trunc=None):
    return LaurentSeries(min_exp, [Fraction(c) for c in coeffs], trunc)


def test_laurent_mul_telescoping():
    a = series(-1, [1, 1], 1)
    b = series(1, [1], 2)
    out = laurent_mul(a, b)
    assert out.trunc_order == 1
    assert out.min_exp == 0
    assert [out[0], out[1]] == [1, 1]


def test_laurent_mul_identity():
    b = series(-2, [3, 0, Fraction(1, 2)], 0)
    assert laurent_mul(LaurentSeries.one(5), b) == b


def test_laurent_mul_difference_of_squares():
    a = series(-1, [1, -1], 1)
    b = series(-1, [1, 1], 1)
    out = laurent_mul(a, b).truncate(0)
    assert out.min_exp == -2
    assert [out[k] for k in (-2, -1, 0)] == [1, 0, -1]


def test_laurent_mul_truncation_propagates():
    a = series(-1, [1, 2, 3], 1)  # valid to eps^1
    b = series(0, [1, 1], 1)
    out = laurent_mul(a, b)
    # a*b known to min(1 + 0, 1 + (-1)) = 0
    assert out.trunc_order == 0


def test_laurent_mul_leading_cancellation_renormalises():
    a = series(0, [1, 1], 3)
    b = series(0, [0, 1], 3)  # starts at eps^1 after normalisation
    assert b.min_exp == 1
    assert laurent_mul(a, b).min_exp == 1


def test_inv_geometric():
    out = laurent_inv(series(0, [1, 1], 2))
    assert out.min_exp == 0
    assert [out[k] for k in range(3)] == [1, -1, 1]


def test_inv_monomial():
    out = laurent_inv(series(1, [2], 1))
    assert out.min_exp == -1
    assert out[-1] == Fraction(1, 2)


def test_inv_zero_raises():
    with pytest.raises(ZeroSeries):
        laurent_inv(series(0, [0], 2))


def test_float_inv_small_leading_raises():
    a = LaurentSeries(0, [1e-14, 1.0], 1, exact=False, zero_tol=0.0)
    assert laurent_inv(a)[0] == pytest.approx(1e14)
    tiny = LaurentSeries(0, [1e-30, 1.0], 1, exact=False, zero_tol=0.0)
    object.__setattr__(tiny, "zero_tol", 1e-12)
    with pytest.raises(ZeroSeries):
        laurent_inv(tiny)


def test_mode_mixing_is_checked():
    with pytest.raises(CoefficientModeError):
        laurent_mul(series(0, [1], 2), LaurentSeries(0, [1.0], 2, exact=False))


def test_float_threshold_renormalises():
    a = LaurentSeries(-1, [1e-15, 1.0, 2.0], exact=False)
    assert a.min_exp == 0


def test_ratfunc_expand_pole():
    out = ratfunc_expand(RatFunc(s + 2, s + 1), -1, 1)
    assert out.min_exp == -1
    assert [out[-1], out[0], out[1]] == [1, 1, 0]


def test_ratfunc_expand_geometric():
    out = ratfunc_expand(RatFunc(UniPoly.const(1), s + 1), 0, 2)
    assert [out[k] for k in range(3)] == [1, -1, 1]


def test_ratfunc_expand_removable():
    r = RatFunc(s * s - 1, s - 1)
    assert r.den == UniPoly.const(1)
    out = ratfunc_expand(r, 1, 1)
    assert out.min_exp == 0
    assert [out[0], out[1]] == [2, 1]


def test_ratfunc_normal_form():
    r = RatFunc(2 * (s + 1) * (s + 3), 4 * (s + 1))
    assert r.den.lc == 1
    assert r.num == (s + 3) * Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        RatFunc(s, UniPoly())


def test_unipoly_basics():
    p = (s + 1) ** 3
    assert p.coeffs == (1, 3, 3, 1)
    assert p.root_multiplicity(-1) == 3
    assert p.taylor_shift(2) == (s + 3) ** 3
    q, r = divmod(p, s + 2)
    assert q * (s + 2) + r == p
    assert str(-(s + 1)) == "-s - 1"
    assert UniPoly([0, 0]).is_zero()
    assert (s * 2 + 4).primitive() == s + 2
    assert p.compose_linear(2, 1) == (2 * s + 2) ** 3


def unipolys(max_deg=3):
    return st.lists(rats, min_size=1, max_size=max_deg + 1).map(UniPoly)


@settings(max_examples=60, deadline=None)
@given(unipolys(), unipolys(), rats)
def test_expand_at_zero_equals_value(num, den, s1):
    if den.is_zero() or den(s1) == 0:
        return
    r = RatFunc(num, den)
    out = ratfunc_expand(r, s1, 3)
    if out.is_zero():
        assert num(s1) == 0
    else:
        assert out.evaluate_at_zero() == num(s1) / den(s1)


@settings(max_examples=60, deadline=None)
@given(st.integers(-3, 3), st.lists(rats, min_size=1, max_size=5))
def test_mul_inverse_is_one(min_exp, coeffs):
    a = LaurentSeries(min_exp, coeffs)
    if a.is_zero():
        return
    prod = laurent_mul(a, laurent_inv(a))
    assert prod.min_exp == 0
    assert prod[0] == 1
    assert all(prod[k] == 0 for k in range(1, prod.trunc_order + 1))


@settings(max_examples=40, deadline=None)
@given(unipolys(2), unipolys(2), unipolys(2), unipolys(2), st.integers(-2, 2))
def test_expand_multiplicative(n1, d1, n2, d2, s0):
    if d1.is_zero() or d2.is_zero() or n1.is_zero() or n2.is_zero():
        return
    r1, r2 = RatFunc(n1, d1), RatFunc(n2, d2)
    prod = ratfunc_expand(r1 * r2, s0, 4)
    separate = laurent_mul(ratfunc_expand(r1, s0, 6), ratfunc_expand(r2, s0, 6))
    top = min(prod.trunc_order, separate.trunc_order)
    lo = min(prod.min_exp, separate.min_exp)
    assert all(prod[k] == separate[k] for k in range(lo, top + 1))


@given(rats, rats, rats)
def test_rat_associativity_canonical(a, b, c):
    left, right = (a + b) + c, a + (b + c)
    assert left == right
    assert left.denominator > 0
    assert Fraction(left.numerator, left.denominator) == left
