import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from liouville_bcft.errors import DegenerateConnection, DomainError, PoleEncountered
from liouville_bcft.specialfn import (HypParams, LatticeKind, LiouvilleParams,
                                      connection_matrix_01,
                                      connection_matrix_0inf, double_gamma,
                                      double_sine, hyp2f1, lattice_query,
                                      lngamma, log_double_gamma,
                                      log_double_sine)

GAMMAS = (0.7, 1.1, 1.3, 1.7)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# --- parameters and lattices -------------------------------------------------

def test_params():
    p = LiouvilleParams(1.2)
    assert p.Q == pytest.approx(0.6 + 1 / 0.6)
    assert p.q_charge == p.Q and p.b == 0.6
    for bad in (0.0, 2.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            LiouvilleParams(bad)


def test_lattice_query_examples():
    p = LiouvilleParams(1.2)
    assert lattice_query(LatticeKind.GAMMA_POLE, 0, p, 0.1) == (0, 0, 0.0)
    assert lattice_query(LatticeKind.SINE_ZERO, p.Q, p, 0.1) == (0, 0, 0.0)
    assert lattice_query(LatticeKind.GAMMA_POLE, p.Q / 2, p, 0.1) is None
    n, m, d = lattice_query(LatticeKind.SINE_POLE, -2 * p.b - 1 / p.b + 0.01j,
                            p, 0.1)
    assert (n, m) == (2, 1) and d == pytest.approx(0.01)


# --- Euler Gamma -------------------------------------------------------------

def test_lngamma_values():
    assert abs(lngamma(1)) < 1e-15
    assert abs(lngamma(0.5) - 0.5 * np.log(np.pi)) < 1e-14
    v = np.exp(lngamma(0.3) + lngamma(0.7))
    assert rel(v, np.pi / np.sin(0.3 * np.pi)) < 1e-12
    with pytest.raises(PoleEncountered) as exc:
        lngamma(-2)
    assert exc.value.witness["z_re"] == -2.0


complex_pts = st.builds(complex, st.floats(-4.5, 4.5), st.floats(-3, 3))


@settings(max_examples=60, deadline=None)
@given(complex_pts)
def test_gamma_reflection_and_duplication(A):
    if min(abs(A - k) for k in range(-6, 7)) < 0.05:
        return
    lhs = np.exp(lngamma(A) + lngamma(1 - A))
    assert rel(lhs, np.pi / np.sin(np.pi * A)) < 1e-12
    if abs(2 * A - round((2 * A).real)) < 0.05:
        return
    dup = np.exp(lngamma(A) + lngamma(A + 0.5) - lngamma(2 * A))
    assert rel(dup, 2 ** (1 - 2 * A) * np.sqrt(np.pi)) < 1e-12


# --- double Gamma ------------------------------------------------------------

@pytest.mark.parametrize("g", GAMMAS)
def test_double_gamma_centre(g):
    p = LiouvilleParams(g)
    assert abs(np.exp(log_double_gamma(p.Q / 2, p)) - 1) < 1e-12


def test_double_gamma_shift_example():
    p = LiouvilleParams(1.5)
    x, g = 1.1, 1.5
    lhs = np.exp(log_double_gamma(x, p) - log_double_gamma(x + g / 2, p))
    rhs = np.exp(lngamma(g * x / 2)) * (g / 2) ** (-g * x / 2 + 0.5) \
        / np.sqrt(2 * np.pi)
    assert rel(lhs, rhs) < 1e-10


def test_double_gamma_oracle_value():
    # multiprecision quadrature of the defining integral, frozen
    p = LiouvilleParams(1.0)
    ref = 0.7551527657309792 - 0.01573142938343171j
    assert rel(double_gamma(0.8 + 0.3j, p), ref) < 1e-10


def test_double_gamma_pole():
    p = LiouvilleParams(1.3)
    with pytest.raises(PoleEncountered) as exc:
        double_gamma(-p.b - 2 / p.gamma, p)
    w = exc.value.witness
    assert (w["n"], w["m"]) == (1, 1)


def grid_points(p, n=40, seed=0):
    """Complex points at distance >= 0.05 from every lattice involved."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x = complex(rng.uniform(-2.5, 4.5), rng.uniform(-2, 2))
        probes = [x, x + p.b, x + 1 / p.b, p.Q - x]
        if all(lattice_query(LatticeKind.GAMMA_POLE, y, p, 0.05) is None
               for y in probes) and \
                lattice_query(LatticeKind.SINE_ZERO, x, p, 0.05) is None and \
                lattice_query(LatticeKind.SINE_ZERO, x + p.b, p, 0.05) is None and \
                lattice_query(LatticeKind.SINE_ZERO, x + 1 / p.b, p, 0.05) is None:
            out.append(x)
    return out


@pytest.mark.parametrize("g", (0.7, 1.1, 1.7))
def test_double_gamma_shift_grid(g):
    p = LiouvilleParams(g)
    for x in grid_points(p):
        for chi, arg in ((p.b, g * x / 2), (1 / p.b, 2 * x / g)):
            expo = (-g * x / 2 + 0.5) if chi == p.b else (2 * x / g - 0.5)
            lhs = np.exp(log_double_gamma(x, p) - log_double_gamma(x + chi, p))
            if abs(arg - round(arg.real)) < 1e-6 and round(arg.real) <= 0:
                continue
            rhs = np.exp(lngamma(arg) + expo * np.log(g / 2)) / np.sqrt(2 * np.pi)
            assert rel(lhs, rhs) < 1e-10, (x, chi)


@pytest.mark.parametrize("g", (0.7, 1.1, 1.7))
def test_double_gamma_q_ratio(g):
    p = LiouvilleParams(g)
    lhs = np.exp(log_double_gamma(p.Q, p) - log_double_gamma(2 / g, p))
    assert rel(lhs, np.sqrt(2 * np.pi) * np.sqrt(g / 2)) < 1e-10


# --- double Sine -------------------------------------------------------------

def test_double_sine_examples():
    p = LiouvilleParams(1.3)
    assert abs(double_sine(p.Q / 2, p) - 1) < 1e-12
    x = 0.9
    assert rel(double_sine(x + p.b, p) / double_sine(x, p),
               2 * np.sin(np.pi * 1.3 * x / 2)) < 1e-10
    assert abs(double_sine(x, p) * double_sine(p.Q - x, p) - 1) < 1e-11
    assert double_sine(p.Q, p) == 0
    assert log_double_sine(p.Q + p.b, p).real == -np.inf
    with pytest.raises(PoleEncountered):
        double_sine(-p.b, p)


@pytest.mark.parametrize("g", (0.7, 1.1, 1.7))
def test_double_sine_grid(g):
    p = LiouvilleParams(g)
    for x in grid_points(p, seed=1):
        assert abs(double_sine(x, p) * double_sine(p.Q - x, p) - 1) < 1e-11
        for chi in (p.b, 1 / p.b):
            ratio = double_sine(x + chi, p) / double_sine(x, p)
            assert rel(ratio, 2 * np.sin(np.pi * chi * x)) < 1e-10


@pytest.mark.parametrize("g", (0.9, 1.3))
def test_double_sine_asymptotics(g):
    # |S(x)| / |exp(-+ i pi x (x - Q)/2)| settles to a constant as |Im x| grows
    p = LiouvilleParams(g)
    for sign in (1, -1):
        r = []
        for Y in (5.0, 8.0):
            x = 0.3 + sign * 1j * Y
            r.append(abs(double_sine(x, p))
                     / abs(np.exp(-sign * 1j * np.pi * x * (x - p.Q) / 2)))
        assert abs(r[1] / r[0] - 1) < 0.05


def test_log_double_sine_vectorised_matches_scalar():
    from liouville_bcft.specialfn import log_double_sine_array
    p = LiouvilleParams(1.2)
    xs = np.array([0.3 + 0.2j, 1.1 - 4j, 2.5 + 7j, -0.7 + 0.1j])
    arr = log_double_sine_array(xs, p)
    for x, v in zip(xs, arr):
        assert abs(np.exp(v) - double_sine(x, p)) <= 1e-12 * abs(np.exp(v))


# --- hypergeometric ----------------------------------------------------------

def test_hyp2f1_closed_forms():
    assert hyp2f1(HypParams(0.3, 0.4, 1.7), 0) == 1
    assert abs(hyp2f1(HypParams(1, 1, 2), 0.5) - 2 * np.log(2)) < 1e-14
    with pytest.raises(DomainError):
        hyp2f1(HypParams(1, 1, 2), 1.0)


@pytest.mark.parametrize("t, ref", [
    (0.7, 0.8567276335406859), (-0.8, 1.1355400538882965),
    (-3.0, 1.4420492785342298), (0.3, 0.942736134753767)])
def test_hyp2f1_oracle(t, ref):
    # multiprecision direct series, frozen
    assert rel(hyp2f1(HypParams(0.37, -0.61, 1.23), t), ref) < 1e-12


def test_connection_matrices_oracle():
    h = HypParams(0.3, 0.7, 1.4)
    m01 = np.array([[1.593718712337813, 0.8506508083520401],
                    [-0.8506508083520399, 0.17342659034515687]])
    m0i = np.array([[0.17342659034515687, -0.8506508083520401],
                    [0.8506508083520399, 1.593718712337813]])
    assert np.max(np.abs(connection_matrix_01(h) - m01)) < 1e-12
    assert np.max(np.abs(connection_matrix_0inf(h) - m0i)) < 1e-12


def test_connection_constant_solution():
    # F(0, B; C; t) = 1, so with C2 = 0 the t = 1 coefficient B1 equals C1
    h = HypParams(0.0, 0.37, 1.21)
    M = connection_matrix_01(h)
    assert abs(M[0, 0] - 1) < 1e-14 and abs(M[1, 0]) < 1e-14


def test_connection_degenerate():
    with pytest.raises(DegenerateConnection):
        connection_matrix_01(HypParams(0.3, 0.7, 1.0))
    with pytest.raises(DegenerateConnection):
        connection_matrix_0inf(HypParams(0.3, 1.3, 1.7))


def _ode_rhs(A, B, C):
    def f(t, y):
        return [y[1], (A * B * y[0] - (C - (A + B + 1) * t) * y[1])
                / (t * (1 - t))]
    return f


@settings(max_examples=10, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9), st.floats(0.2, 1.8))
def test_connection_01_against_ode(A, B, C):
    gaps = (C, C - A - B)
    if any(abs(g - round(g)) < 0.05 for g in gaps):
        return
    h = HypParams(A, B, C)
    t0, t1 = 0.1, 0.9
    eps = 1e-7
    y0 = [hyp2f1(h, t0), (hyp2f1(h, t0 + eps) - hyp2f1(h, t0 - eps)) / (2 * eps)]
    sol = solve_ivp(_ode_rhs(A, B, C), (t0, t1), np.array(y0, complex),
                    method="DOP853", rtol=1e-12, atol=1e-14)
    B1, B2 = connection_matrix_01(h)[:, 0]
    s = 1 - t1
    from scipy.special import hyp2f1 as sp
    exact = B1 * sp(A, B, 1 + A + B - C, s) \
        + B2 * s ** (C - A - B) * sp(C - A, C - B, 1 + C - A - B, s)
    assert abs(sol.y[0, -1] - exact) < 1e-7 * max(1, abs(exact))
