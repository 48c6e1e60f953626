from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa.errors import InsufficientMoments, NotFound
from igusa.exact import UniPoly
from igusa.moments import Domain, MomentSequence, moments
from igusa.mpoly import default_vars, parse_poly
from igusa.recurrence import (
    OdeRelation,
    Recurrence,
    guess_ode,
    guess_recurrence,
    normalize_recurrence,
    ode_to_recurrence,
    scale_recurrence,
    verify_recurrence,
)

s = UniPoly.x()
one = UniPoly.const(1)


def mom_of(text, n=1, N=60):
    return moments(parse_poly(text, default_vars(n)), Domain.standard(n), N)


def rec(*polys):
    return Recurrence(tuple(polys))


def test_guess_linear():
    got = guess_recurrence(mom_of("x1"))
    assert got.same_up_to_scalar(rec(-(s + 1), s + 2))


def test_guess_beta():
    got = guess_recurrence(mom_of("x1 - x1^2"))
    stated = rec(-(s + 1) ** 2, (2 * s + 2) * (2 * s + 3))
    # the stated pair shares the factor (s+1); the guess is its content-free form
    assert got.same_up_to_scalar(normalize_recurrence(stated))
    assert got.same_up_to_scalar(rec(-(s + 1), 4 * s + 6))
    assert verify_recurrence(stated, mom_of("x1 - x1^2")).ok


def test_guess_constant():
    got = guess_recurrence(mom_of("2"))
    assert got.same_up_to_scalar(rec(UniPoly.const(-2), one))


def test_guess_two_dimensional():
    got = guess_recurrence(mom_of("x1*x2", 2, 60))
    assert got.same_up_to_scalar(rec(-(s + 1) ** 2, 4 * s * s + 14 * s + 12))


def test_guess_is_normalized():
    got = guess_recurrence(mom_of("x1 - x1^2"))
    assert got.coeffs[-1].lc > 0
    assert not got.coeffs[0].is_zero()
    assert got == normalize_recurrence(got)


def test_verify_examples():
    r = rec(-(s + 1), s + 2)
    report = verify_recurrence(r, mom_of("x1", N=30))
    assert report.ok and report.failures == () and report.checked == 30
    bad = verify_recurrence(r, mom_of("x1^2", N=10))
    assert not bad.ok
    assert bad.failures == tuple(range(10))


def test_verify_too_short_is_empty():
    r = rec(-(s + 1), s + 2)
    report = verify_recurrence(r, MomentSequence((Fraction(1),)))
    assert report.checked == 0 and not report.ok


def test_normalize_examples():
    shifted = normalize_recurrence(rec(UniPoly(), s))
    assert shifted.coeffs == (s - 1,)
    already = rec(-(s + 1), s + 2)
    assert normalize_recurrence(already) == already
    common = rec(-(s + 1) * (s + 1), (s + 1) * (s + 2))
    assert normalize_recurrence(common) == already


def test_normalize_positive_leading_and_integer_content():
    r = normalize_recurrence(rec(Fraction(1, 3) * (s + 1), Fraction(-2, 3) * (s + 2)))
    assert r.coeffs[-1].lc > 0
    assert all(c.denominator == 1 for p in r.coeffs for c in p.coeffs)


def test_ode_constant_two():
    ode = guess_ode(mom_of("2", N=30).values)
    # (1 - 2t) J' - 2 J = 0 up to scalar
    target = (UniPoly.const(-2), UniPoly([1, -2]))
    ratio = ode.coeffs[1].lc / target[1].lc
    assert ode.order == 1
    assert all(a == b * ratio for a, b in zip(ode.coeffs, target))


def test_ode_linear_needs_order_two():
    ode = guess_ode(mom_of("x1", N=40).values)
    assert ode.order == 2
    with pytest.raises(NotFound):
        guess_ode(mom_of("x1", N=40).values, max_order=1)


def test_ode_constant_series():
    ode = guess_ode([Fraction(3)] + [Fraction(0)] * 29)
    assert ode.coeffs == (UniPoly(), one)


def test_ode_geometric_series():
    # sum 3 t^l = 3 / (1 - t) satisfies (1 - t) J' - J = 0
    ode = guess_ode([Fraction(3)] * 30)
    assert ode.coeffs == (UniPoly.const(1), UniPoly([-1, 1]))


def test_ode_to_recurrence_examples():
    c = Fraction(5)
    r = ode_to_recurrence(OdeRelation((UniPoly.const(-c), UniPoly([1, -c]))))
    assert r.same_up_to_scalar(rec(UniPoly.const(-c), one))
    # J' = 0 gives (s+1) I(s+1) = 0, which normalizes to the single term s I(s) = 0
    r0 = ode_to_recurrence(OdeRelation((UniPoly(), one)))
    assert r0.coeffs == (s,)
    assert verify_recurrence(r0, [Fraction(7)] + [Fraction(0)] * 10).ok


def test_guess_failures():
    with pytest.raises(InsufficientMoments):
        guess_recurrence(mom_of("x1", N=3))
    # moments of a nonholonomic-looking sequence: no relation of small order/degree
    wild = MomentSequence(tuple(Fraction(k * k + 1, 2 ** k + 3) + Fraction(1, k + 7) for k in range(80)))
    with pytest.raises(NotFound):
        guess_recurrence(wild, max_order=2, max_degree=2)


def test_recurrence_json_roundtrip():
    r = rec(-(s + 1), Fraction(1, 2) * s + 3)
    assert Recurrence.from_json(r.to_json()) == r


EXAMPLES = ["x1", "x1 - x1^2", "2", "x1^2 + x1", "1/2*x1 + 1/3"]


@pytest.mark.parametrize("text", EXAMPLES)
def test_guess_is_sound_on_fresh_moments(text):
    r = guess_recurrence(mom_of(text, N=60))
    fresh = mom_of(text, N=100)
    assert verify_recurrence(r, fresh, start=60 - r.order).ok


@pytest.mark.parametrize("text", ["x1", "2", "x1 - x1^2"])
def test_ode_path_matches_direct_guess(text):
    mom = mom_of(text, N=80)
    direct = guess_recurrence(mom)
    via_ode = ode_to_recurrence(guess_ode(mom.values))
    assert verify_recurrence(via_ode, mom).ok
    assert verify_recurrence(direct, mom).ok


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["x1", "x1 - x1^2", "x1^2 + 1"]),
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
def test_scaling_covariance(text, lam):
    base = mom_of(text, N=60)
    scaled = MomentSequence(tuple(v * lam ** k for k, v in enumerate(base.values)))
    r = guess_recurrence(base)
    r_scaled = scale_recurrence(r, lam)
    assert verify_recurrence(r_scaled, scaled).ok
    guessed = guess_recurrence(scaled)
    assert guessed.same_up_to_scalar(r_scaled)
    assert verify_recurrence(scale_recurrence(guessed, 1 / lam), base).ok
