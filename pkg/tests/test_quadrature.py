import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igusa.errors import NegativeIntegrand, NotConverged, RadiusExceeded
from igusa.moments import Domain, SimplexDomain, integrate_poly
from igusa.mpoly import default_vars, parse_poly
from igusa.quadrature import (
    QuadConfig,
    adaptive_cube,
    gauss_log,
    integrate_box_rep,
    integrate_power_log,
    j_value,
)

TOL = 1e-12
CFG = QuadConfig(tol=TOL)
LINE = Domain.standard(1)
TRI = Domain.standard(2)


def P(text, n=1):
    return parse_poly(text, default_vars(n))


def closed_form(m, l):
    """Integral of x^m log(x)^l over [0, 1]."""
    return (-1) ** l * math.factorial(l) / (m + 1) ** (l + 1)


@pytest.mark.parametrize("sigma,l,expected", [(2, 1, -1 / 9), (2, 0, 1 / 3), (1, 2, 1 / 4)])
def test_power_log_examples(sigma, l, expected):
    res = integrate_power_log(P("x1"), sigma, l, LINE, CFG, strict=True)
    assert res.converged
    assert res.value == pytest.approx(expected, abs=10 * TOL)


@pytest.mark.parametrize("m,l", [(1, 3), (3, 4), (0, 2)])
def test_power_log_closed_form(m, l):
    # sigma = 0 is not allowed; x^m with m = 0 uses f = x and sigma small instead
    sigma = m if m else 0.5
    expected = (-1) ** l * math.gamma(l + 1) / (sigma + 1) ** (l + 1)
    res = integrate_power_log(P("x1"), sigma, l, LINE, CFG)
    assert res.value == pytest.approx(expected, abs=1e-10)


def test_power_log_polynomial_case_matches_exact():
    f = P("x1*x2 + 1/3*x1", 2)
    exact = integrate_poly(f * f, TRI)
    res = integrate_power_log(f, 2, 0, TRI, CFG)
    assert res.value == pytest.approx(float(exact), abs=10 * TOL)


def test_power_log_two_dimensional_log_singularity():
    # integral of x1 x2 log(x1 x2)^1 over the triangle = d/ds [Gamma(s+1)^2/Gamma(2s+3)] at s=1
    import mpmath

    mpmath.mp.dps = 30
    oracle = mpmath.diff(lambda s: mpmath.gamma(s + 1) ** 2 / mpmath.gamma(2 * s + 3), 1)
    res = integrate_power_log(P("x1*x2", 2), 1, 1, TRI, CFG, strict=True)
    assert res.value == pytest.approx(float(oracle), abs=1e-11)


@pytest.mark.parametrize("f,s0,l,expected", [
    ("x1", 2, 1, -1 / 9),
    ("x1", 1, 0, 1 / 2),
    ("2", 1, 1, 2 * math.log(2)),
])
def test_box_rep_examples(f, s0, l, expected):
    res = integrate_box_rep(P(f), s0, l, LINE, CFG)
    assert res.value == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("f,s0,l", [("x1", 1, 1), ("x1", 2, 2), ("x1 - x1^2", 1, 1), ("x1 - x1^2", 3, 1)])
def test_box_rep_agrees_with_power_log(f, s0, l):
    a = integrate_box_rep(P(f), s0, l, LINE, QuadConfig(tol=1e-10))
    b = integrate_power_log(P(f), s0, l, LINE, CFG)
    assert a.converged
    assert a.value == pytest.approx(b.value, abs=1e-9)


def test_j_value_examples():
    res = j_value(P("x1"), 0.5, LINE, CFG)
    assert res.value == pytest.approx(2 * math.log(2), abs=1e-11)
    assert j_value(P("x1*x2", 2), 0.0, TRI, CFG).value == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(RadiusExceeded):
        j_value(P("x1"), 1.5, LINE, CFG)
    with pytest.raises(RadiusExceeded):
        j_value(P("x1"), 0.95, LINE, CFG)  # R = 1.1 so 0.95 * 1.1 >= 1


def test_j_value_matches_moment_series():
    from igusa.moments import moments

    f = P("x1 - x1^2")
    t = 0.3
    mom = moments(f, LINE, 40)
    series = math.fsum(float(v) * t ** k for k, v in enumerate(mom.values))
    assert j_value(f, t, LINE, CFG).value == pytest.approx(series, abs=1e-12)


def test_negative_integrand_rejected():
    with pytest.raises(NegativeIntegrand):
        integrate_power_log(P("x1 - 1/2"), 1.5, 0, LINE, CFG)


def test_signed_domain_pieces():
    half = Fraction(1, 2)
    d = Domain(1, (SimplexDomain(((0,), (1,))), SimplexDomain(((half,), (1,)), -1)))
    # integral of x^2 over [0, 1/2]
    assert integrate_power_log(P("x1"), 2, 0, d, CFG).value == pytest.approx(1 / 24, abs=1e-12)


def test_strict_not_converged():
    cfg = QuadConfig(tol=1e-14, max_depth=1, base_rule=2)
    with pytest.raises(NotConverged) as info:
        integrate_power_log(P("x1"), 0.5, 3, LINE, cfg, strict=True)
    assert info.value.result is not None
    res = integrate_power_log(P("x1"), 0.5, 3, LINE, cfg)
    assert not res.converged


def test_adaptive_cube_smooth_function():
    value, err, cells, converged = adaptive_cube(lambda U: np.exp(U[:, 0] + U[:, 1]), 2, CFG)
    assert converged and cells >= 1
    assert value == pytest.approx((math.e - 1) ** 2, abs=1e-12)
    assert err >= 0


@pytest.mark.parametrize("sigma,l", [(2, 1), (1, 2), (0.5, 3)])
def test_error_monotone_in_tolerance(sigma, l):
    oracle = (-1) ** l * math.gamma(l + 1) / (sigma + 1) ** (l + 1)
    errors = []
    for tol in (1e-3, 5e-4, 2.5e-4, 1.25e-4, 6.25e-5, 3.125e-5):
        errors.append(abs(integrate_power_log(P("x1"), sigma, l, LINE, QuadConfig(tol=tol)).value - oracle))
    for prev, cur in zip(errors, errors[1:]):
        assert cur <= prev + 1e-15


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.1, max_value=10.0))
def test_gauss_log_identity(x):
    assert gauss_log(np.array([x]))[0] == pytest.approx(math.log(x), abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 3))
def test_power_log_converged_result_is_within_tolerance(m, l):
    res = integrate_power_log(P("x1"), m, l, LINE, QuadConfig(tol=1e-10))
    assert res.converged
    assert abs(res.value - closed_form(m, l)) <= 1e-10 + res.err_estimate
