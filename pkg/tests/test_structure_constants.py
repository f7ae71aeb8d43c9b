import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from liouville_bcft.errors import (BranchAmbiguity, CoincidentPoints,
                                   ConvergenceDomain, DomainError)
from liouville_bcft.numerics import extrapolate_limit, integrate_real
from liouville_bcft.specialfn import LiouvilleParams, double_sine, lngamma
from liouville_bcft.structure_constants import (
    BulkBoundaryArgs, KernelArgs, ReflectionArgs, ShiftContext,
    ThreePointArgs, _hos_integrand, boundary_3pt, bulk_boundary,
    bulk_boundary_to_modular, conformal_dim, fusion_kernel,
    fusion_to_three_point, g_chi, g_hos, h_pt, j_hos, modular_kernel,
    modular_to_bulk_boundary, mu_of_sigma, r_fzz, sigma_of_mu,
    three_point_to_fusion, unit_volume_constant)

P12 = LiouvilleParams(1.2)
Q12 = P12.Q


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# --- boundary parameter ------------------------------------------------------

def test_mu_of_sigma_values():
    p = LiouvilleParams(1.1)
    base = 1 / np.sqrt(np.sin(np.pi * 1.1 ** 2 / 4))
    assert abs(mu_of_sigma(p.Q / 2, p) - base) < 1e-14
    assert abs(mu_of_sigma(p.Q / 2 + 1 / (2 * 1.1), p)) < 1e-14


def test_sigma_of_mu_round_trip():
    p = LiouvilleParams(1.1)
    s = sigma_of_mu(0.4, p)
    assert abs(mu_of_sigma(s, p) - 0.4) < 1e-12
    assert p.Q / 2 <= s.real < p.Q / 2 + 1 / (2 * 1.1)
    with pytest.raises(BranchAmbiguity):
        sigma_of_mu(0.0, p)


def test_g_chi():
    p = P12
    for chi in (p.b, 1 / p.b):
        ctx = ShiftContext.build(chi, (1, 1, 1), p)
        base = np.sin(np.pi * p.gamma ** 2 / 4) ** (-chi / p.gamma)
        assert abs(g_chi(Q12 / 2, ctx, p) - base) < 1e-14
        s = 0.7 + 0.2j
        assert abs(g_chi(s + 1 / chi, ctx, p) - g_chi(s, ctx, p)) < 1e-13
    with pytest.raises(DomainError):
        ShiftContext.build(0.5, (1, 1, 1), p)
    ctx = ShiftContext.build(p.b, (1.0, 1.5, 2.0), p)
    assert ctx.q == pytest.approx((2 * Q12 - 4.5 + p.b) / p.gamma)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 1.9), st.floats(-1, 3), st.floats(-1, 1))
def test_g_half_gamma_is_mu(g, x, y):
    p = LiouvilleParams(g)
    ctx = ShiftContext.build(g / 2, (0, 0, 0), p)
    s = complex(x, y)
    assert abs(g_chi(s, ctx, p) - mu_of_sigma(s, p)) <= 1e-14 * max(
        1, abs(mu_of_sigma(s, p)))


def test_conformal_dim():
    p = P12
    assert conformal_dim(0, p) == 0
    assert abs(conformal_dim(2 * Q12, p)) < 1e-15
    assert conformal_dim(Q12, p) == pytest.approx(Q12 ** 2 / 4)


def test_unit_volume_constant():
    ref = np.pi * 0.5 ** 1.5 * special.gamma(0.25) / special.gamma(0.75)
    assert unit_volume_constant(LiouvilleParams(1.0)) == pytest.approx(ref, 1e-14)
    # multiprecision Gamma oracle, frozen
    assert unit_volume_constant(LiouvilleParams(0.7)) == pytest.approx(
        3.5220167746307002, 1e-13)
    assert unit_volume_constant(LiouvilleParams(1.7)) == pytest.approx(
        1.1171695264776095, 1e-13)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 1.99))
def test_unit_volume_positive(g):
    assert unit_volume_constant(LiouvilleParams(g)) > 0


# --- reflection coefficient --------------------------------------------------

def test_r_fzz_at_q():
    p = LiouvilleParams(1.3)
    for s1, s2 in ((p.Q / 2, p.Q / 2), (p.Q / 2 + 0.1j, p.Q / 2 - 0.07)):
        assert abs(r_fzz(ReflectionArgs(p.Q, s1, s2), p) + 1) < 1e-12


def test_r_fzz_reflection():
    p = LiouvilleParams(1.3)
    s1, s2 = p.Q / 2 + 0.05, p.Q / 2 - 0.03
    prod = r_fzz(ReflectionArgs(1.4, s1, s2), p) \
        * r_fzz(ReflectionArgs(2 * p.Q - 1.4, s1, s2), p)
    assert abs(prod - 1) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(0.6, 1.8), st.floats(0.4, 2.6), st.floats(-0.3, 0.3),
       st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_r_fzz_sigma_swap(g, beta, u1, u2, v):
    p = LiouvilleParams(g)
    s1, s2 = p.Q / 2 + u1 + 1j * v, p.Q / 2 + u2
    try:
        r12 = r_fzz(ReflectionArgs(beta, s1, s2), p)
    except DomainError:
        return
    r21 = r_fzz(ReflectionArgs(beta, s2, s1), p)
    assert abs(r12 - r21) <= 1e-12 * max(abs(r12), 1e-300)


def test_r_fzz_smooth_along_segment():
    p = P12
    s1, s2 = Q12 / 2 + 0.05, Q12 / 2 - 0.1j
    h = 1e-3
    # R has poles at beta = Q - gamma/2 (1.667) and Q - gamma (1.067)
    for beta in np.linspace(1.2, 1.55, 8):
        f = [r_fzz(ReflectionArgs(beta + k * h, s1, s2), p) for k in (-1, 0, 1)]
        second = abs(f[0] - 2 * f[1] + f[2]) / h ** 2
        assert second < 1e3 * abs(f[1])


# --- three-point function ----------------------------------------------------

def test_h_pt_residue_normalisation():
    # (beta_bar/2 - Q) h_pt -> 1 at beta1 = 2Q - beta2 - beta3
    b2 = b3 = 1.6
    a = ThreePointArgs((0, b2, b3), (Q12 / 2, Q12 / 2 + 0.1, Q12 / 2 - 0.1))
    beta0 = 2 * Q12 - b2 - b3
    val, err = extrapolate_limit(
        lambda e: e / 2 * h_pt(a.with_beta1(beta0 + e), P12),
        [0.04, 0.02, 0.01, 0.005, 0.0025])
    assert abs(val - 1) < 1e-6


def test_h_pt_independent_of_contour_plan():
    a = ThreePointArgs((1.6, 1.7, 1.8),
                       (Q12 / 2 + 0.05, Q12 / 2 - 0.04 + 0.1j, Q12 / 2 + 0.02))
    v1, _ = h_pt(a, P12, full_output=True)
    v2 = h_pt(a, P12, base_re=-0.5)
    assert rel(v1, v2) < 1e-8


# --- bulk-boundary function --------------------------------------------------

def test_j_hos_convergence_domain():
    with pytest.raises(ConvergenceDomain):
        j_hos(BulkBoundaryArgs(2.0, 0.9, 0.1), P12)
    with pytest.raises(ConvergenceDomain):
        j_hos(BulkBoundaryArgs(2.0, 2 * Q12 + 0.2, Q12 / 2), P12)


def test_j_hos_even_part():
    # On the imaginary axis the S-ratio is even in t, so the full line
    # integral equals the integral over y >= 0 of f(iy) + f(-iy).
    a = BulkBoundaryArgs(2.1, 0.9, Q12 / 2 + 0.05 + 0.03j)
    full = j_hos(a, P12, base_re=0.0)
    f = _hos_integrand(a, P12)
    half, _ = integrate_real(lambda y: f(1j * y) + f(-1j * y), 0, 30,
                             breakpoints=np.arange(0.5, 30, 0.5))
    assert rel(full, half) < 1e-9


def test_g_hos_residue():
    beta, sigma = 0.9, Q12 / 2 + 0.05 + 0.03j
    a0 = Q12 - beta / 2
    eps = [0.04, 0.02, 0.01, 0.005, 0.0025]
    val, _ = extrapolate_limit(
        lambda e: e * g_hos(BulkBoundaryArgs(a0 + e, beta, sigma), P12), eps)
    assert rel(val, 2 ** (-(Q12 - beta / 2) ** 2 / 2)) < 1e-5
    val, _ = extrapolate_limit(
        lambda e: e * j_hos(BulkBoundaryArgs(a0 + e, beta, sigma), P12), eps)
    assert rel(val, 1 / (2 * np.pi * double_sine(Q12 - beta / 2, P12) ** 2)) < 1e-5


# --- kernels -----------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.1, 2.0), min_size=4, max_size=4),
       st.floats(-2, 2), st.floats(-2, 2))
def test_fusion_identification_bijective(alphas, P, Pp):
    k = KernelArgs(alphas, P, Pp)
    back = three_point_to_fusion(fusion_to_three_point(k, P12), P12)
    assert np.allclose(back.alpha_primes, k.alpha_primes, atol=1e-14)
    assert abs(back.P - k.P) < 1e-14 and abs(back.P_prime - k.P_prime) < 1e-14
    m = KernelArgs(alphas[:1], P, Pp)
    back = bulk_boundary_to_modular(modular_to_bulk_boundary(m, P12), P12)
    assert abs(back.alpha_primes[0] - m.alpha_primes[0]) < 1e-14
    assert abs(back.P - m.P) < 1e-14 and abs(back.P_prime - m.P_prime) < 1e-14


def test_kernel_argument_counts():
    with pytest.raises(ValueError):
        fusion_to_three_point(KernelArgs((1.0,), 0.3, 0.4), P12)
    with pytest.raises(ValueError):
        modular_to_bulk_boundary(KernelArgs((1.0, 1.1), 0.3, 0.4), P12)


def test_kernels_finite_on_real_momenta():
    rng = np.random.default_rng(3)
    for _ in range(10):
        alphas = rng.uniform(0.6, 1.6, 4)
        P, Pp = rng.uniform(0.2, 1.0, 2)
        v = fusion_kernel(KernelArgs(alphas, P, Pp), P12)
        assert np.isfinite(v)
    for _ in range(3):
        v = modular_kernel(KernelArgs((rng.uniform(0.6, 1.4),),
                                      rng.uniform(0.2, 0.8),
                                      rng.uniform(0.2, 0.8)), P12)
        assert np.isfinite(v)


def test_modular_prefactor_gamma_value():
    # multiprecision Gamma oracle, frozen: Gamma(2 i P'/gamma), P' = 0.37
    p = LiouvilleParams(1.3)
    alpha = p.Q + 0.37j
    v = np.exp(lngamma(2 / p.gamma * (alpha - p.Q)))
    assert rel(v, -0.3607038579380544 - 1.330066917471057j) < 1e-13


# --- correlators -------------------------------------------------------------

def _pt_args():
    return ThreePointArgs((1.6, 1.7, 1.8),
                          (Q12 / 2 + 0.05, Q12 / 2 - 0.04, Q12 / 2 + 0.02))


def test_boundary_3pt_gauge_and_scaling():
    a = _pt_args()
    h = h_pt(a, P12)
    assert boundary_3pt(0, 1, np.inf, a, P12) == h
    c1 = boundary_3pt(0.3, 1.1, -2.0, a, P12)
    c2 = boundary_3pt(0.6, 2.2, -4.0, a, P12)
    total = sum(conformal_dim(b, P12) for b in a.beta)
    assert rel(c2, c1 * 2 ** (-total)) < 1e-12
    with pytest.raises(CoincidentPoints):
        boundary_3pt(0, 0, 1, a, P12)
    with pytest.raises(CoincidentPoints):
        boundary_3pt(0, np.inf, -np.inf, a, P12)


def test_bulk_boundary_position_factor():
    alpha, beta, sigma = 2.1, 0.9, Q12 / 2 + 0.05
    g = g_hos(BulkBoundaryArgs(alpha, beta, sigma), P12)
    v = bulk_boundary(1j, 0.0, alpha, beta, sigma, P12)
    expo = 2 * conformal_dim(alpha, P12) - conformal_dim(beta, P12)
    assert rel(v, 2 ** (-expo) * g) < 1e-13
    with pytest.raises(DomainError):
        bulk_boundary(0.5, 0.0, alpha, beta, sigma, P12)
