import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liouville_bcft.errors import (DivergentSequence, NonFiniteIntegrand,
                                   SubdivisionLimit)
from liouville_bcft.numerics import (DEFAULT_SETTINGS, QuadSettings,
                                     extrapolate_limit, integrate_real)
from liouville_bcft.specialfn import LiouvilleParams


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadSettings(rel_tol=0)
    with pytest.raises(ValueError):
        QuadSettings(abs_tol=-1)
    with pytest.raises(ValueError):
        QuadSettings(max_subdivisions=0)
    s = QuadSettings(1e-8, 1e-12, 10).scaled(0.1)
    assert s.rel_tol == pytest.approx(1e-9) and s.abs_tol == pytest.approx(1e-13)


def test_constant_integrand():
    val, err = integrate_real(lambda t: np.ones_like(t, dtype=complex), 0, 1)
    assert abs(val - 1) < 1e-15 and err <= 1e-11


def test_oscillatory_exponential():
    val, err = integrate_real(lambda t: np.exp(1j * t), 0, np.pi)
    assert abs(val - 2j) < 1e-12
    assert err <= max(DEFAULT_SETTINGS.rel_tol * abs(val),
                      DEFAULT_SETTINGS.abs_tol)


def test_scalar_callable():
    val, _ = integrate_real(lambda t: t * t, 0, 3, vectorized=False)
    assert val == pytest.approx(9)


def test_double_gamma_bracket_vanishes_at_centre():
    # At x = Q/2 every term of the defining bracket is zero, so the
    # integral of log Gamma_{gamma/2}(Q/2) is exactly 0.
    p = LiouvilleParams(1.0)
    x, Q, b = p.Q / 2, p.Q, p.b

    def bracket(t):
        return ((np.exp(-x * t) - np.exp(-Q * t / 2))
                / ((1 - np.exp(-b * t)) * (1 - np.exp(-t / b)))
                - (Q / 2 - x) ** 2 / 2 * np.exp(-t) + (x - Q / 2) / t) / t

    val, _ = integrate_real(bracket, 1e-300, 60, breakpoints=[1.0])
    assert abs(val) < 1e-14


def test_errors():
    with pytest.raises(ValueError):
        integrate_real(lambda t: t, 1, 0)
    with pytest.raises(NonFiniteIntegrand):
        integrate_real(lambda t: np.full_like(t, np.nan), 0, 1)
    with pytest.raises(SubdivisionLimit):
        integrate_real(lambda t: np.sin(1 / t) / t, 1e-8, 1,
                       QuadSettings(1e-12, 0, 20))


def test_refinement_reduces_error_estimate():
    # A finer target tolerance forces deeper bisection on an oscillatory
    # integrand and a smaller reported error.
    f = lambda t: np.exp(25j * t) * np.cos(7 * t)
    errs = [integrate_real(f, 0, 4, QuadSettings(tol, 0))[1]
            for tol in (1e-4, 1e-7, 1e-10, 1e-12)]
    assert all(e2 <= e1 for e1, e2 in zip(errs, errs[1:]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4),
       st.lists(st.floats(-3, 3), min_size=4, max_size=4),
       st.floats(-2, 2), st.floats(-2, 2))
def test_linearity(c1, c2, alpha, beta):
    f = np.polynomial.Polynomial(c1)
    g = np.polynomial.Polynomial(c2)
    s = DEFAULT_SETTINGS
    If, ef = integrate_real(lambda t: f(t) + 0j, -1, 2, s)
    Ig, eg = integrate_real(lambda t: g(t) + 0j, -1, 2, s)
    Ih, _ = integrate_real(lambda t: alpha * f(t) + beta * g(t) + 0j, -1, 2, s)
    tol = 2 * (abs(alpha) * max(ef, s.rel_tol * abs(If), s.abs_tol)
               + abs(beta) * max(eg, s.rel_tol * abs(Ig), s.abs_tol)) + 1e-13
    assert abs(Ih - (alpha * If + beta * Ig)) <= tol


def test_extrapolate_linear_and_quadratic():
    eps = [0.1, 0.05, 0.025]
    v, _ = extrapolate_limit(lambda e: 3 + e, eps)
    assert abs(v - 3) < 1e-13
    v, _ = extrapolate_limit(lambda e: 1 + e * e, eps)
    assert abs(v - 1) < 1e-13


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_extrapolate_cubic_exact(c):
    poly = np.polynomial.Polynomial(c)
    v, _ = extrapolate_limit(lambda e: poly(e) + 0j, [0.2, 0.1, 0.05, 0.025])
    assert abs(v - c[0]) <= 1e-12 * max(1, max(abs(x) for x in c))


def test_extrapolate_bad_sequences():
    with pytest.raises(ValueError):
        extrapolate_limit(lambda e: e, [0.1, 0.05])
    with pytest.raises(ValueError):
        extrapolate_limit(lambda e: e, [0.1, 0.2, 0.3])
    with pytest.raises(DivergentSequence):
        extrapolate_limit(lambda e: np.sin(1 / e ** 3), [0.1, 0.05, 0.025, 0.0125])
