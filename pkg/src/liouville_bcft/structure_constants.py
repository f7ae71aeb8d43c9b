r"""Exact formulas for the boundary Liouville structure constants.

Notation: ``b = gamma/2``, ``Q = b + 1/b``, ``G2 = Gamma_{gamma/2}`` (double
Gamma), ``S = S_{gamma/2}`` (double Sine) and ``U`` the unit-volume constant
``pi (gamma/2)^(2 - gamma^2/2) Gamma(gamma^2/4) / Gamma(1 - gamma^2/4)``.
The bulk cosmological constant is set to one.

Every product of special functions is assembled as a sum of logarithms and
exponentiated once.  Prefactor arguments that land on a pole (or, in a
denominator, on a zero) raise :class:`PoleEncountered` naming the factor;
no attempt is made to cancel such singularities against zeros of the
contour integral.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

from .contour import (hos_pole_seeds, integrate_contour, plan_contour,
                      pt_integrand_shifts, pt_pole_seeds)
from .errors import (BranchAmbiguity, CoincidentPoints, ConvergenceDomain,
                     DomainError, PoleEncountered)
from .numerics import DEFAULT_SETTINGS
from .specialfn import (POLE_GUARD, LatticeKind, _near_nonpositive_integer,
                        lattice_query, lngamma, log_double_gamma,
                        log_double_sine, log_double_sine_array)

__all__ = [
    "ThreePointArgs", "BulkBoundaryArgs", "ReflectionArgs", "ShiftContext",
    "KernelArgs", "mu_of_sigma", "sigma_of_mu", "g_chi", "conformal_dim",
    "unit_volume_constant", "pt_decay_rate", "hos_decay_rates", "j_pt",
    "h_pt", "h_pt_prefactor_log", "r_fzz", "j_hos", "g_hos",
    "g_hos_prefactor_log", "fusion_to_three_point", "three_point_to_fusion",
    "modular_to_bulk_boundary", "bulk_boundary_to_modular", "fusion_kernel",
    "modular_kernel", "boundary_3pt", "bulk_boundary",
]

LOG_2PI = np.log(2 * np.pi)
LOG_2 = np.log(2.0)


# ---------------------------------------------------------------------------
# Parameter bundles
# ---------------------------------------------------------------------------

def _triple(values, name):
    vals = tuple(complex(v) for v in values)
    if len(vals) != 3:
        raise ValueError(f"{name} needs three entries, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class ThreePointArgs:
    """Weights ``(beta1, beta2, beta3)`` and boundary parameters
    ``(sigma1, sigma2, sigma3)`` of a boundary three-point function."""
    beta: tuple
    sigma: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", _triple(self.beta, "beta"))
        object.__setattr__(self, "sigma", _triple(self.sigma, "sigma"))

    def replace(self, beta=None, sigma=None):
        return ThreePointArgs(self.beta if beta is None else beta,
                              self.sigma if sigma is None else sigma)

    def with_beta1(self, beta1):
        return ThreePointArgs((beta1,) + self.beta[1:], self.sigma)


@dataclass(frozen=True)
class BulkBoundaryArgs:
    """Bulk weight ``alpha``, boundary weight ``beta`` and parameter
    ``sigma`` of a bulk-boundary function."""
    alpha: complex
    beta: complex
    sigma: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma"):
            object.__setattr__(self, name, complex(getattr(self, name)))


@dataclass(frozen=True)
class ReflectionArgs:
    """Weight ``beta`` and the two boundary parameters of a boundary
    two-point (reflection) coefficient."""
    beta: complex
    sigma1: complex
    sigma2: complex

    def __post_init__(self):
        for name in ("beta", "sigma1", "sigma2"):
            object.__setattr__(self, name, complex(getattr(self, name)))


@dataclass(frozen=True)
class ShiftContext:
    """Shift size ``chi`` (``gamma/2`` or ``2/gamma``) and
    ``q = (2Q - beta1 - beta2 - beta3 + chi)/gamma``."""
    chi: float
    q: complex

    @classmethod
    def build(cls, chi, beta, p):
        chi = _check_chi(chi, p)
        return cls(chi, (2 * p.Q - sum(complex(v) for v in beta) + chi)
                   / p.gamma)


@dataclass(frozen=True)
class KernelArgs:
    """Conformal-block parameters: ``alpha_primes`` (four weights for the
    fusion kernel, one for the modular kernel) and momenta ``P``, ``P'``."""
    alpha_primes: tuple
    P: complex
    P_prime: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha_primes",
                           tuple(complex(v) for v in self.alpha_primes))
        object.__setattr__(self, "P", complex(self.P))
        object.__setattr__(self, "P_prime", complex(self.P_prime))


def _check_chi(chi, p):
    chi = float(chi)
    for allowed in (p.gamma / 2, 2 / p.gamma):
        if abs(chi - allowed) <= 1e-14 * allowed:
            return allowed
    raise DomainError(f"chi must be gamma/2 or 2/gamma, got {chi!r}",
                      {"chi": chi, "gamma": p.gamma})


# ---------------------------------------------------------------------------
# Elementary quantities
# ---------------------------------------------------------------------------

def _sin_factor(p):
    return np.sin(np.pi * p.gamma ** 2 / 4)


def mu_of_sigma(sigma, p):
    """Boundary cosmological constant ``mu_B(sigma)``."""
    sigma = complex(sigma)
    return complex(np.cos(np.pi * p.gamma * (sigma - p.Q / 2))
                   / np.sqrt(_sin_factor(p)))


def sigma_of_mu(mu, p):
    """Inverse of :func:`mu_of_sigma` on the band
    ``|Re sigma - Q/2| < 1/(2 gamma)``.

    ``mu_B`` is even about ``Q/2``, so the band contains two preimages; the
    one with ``Re sigma >= Q/2`` (principal arccos) is returned.

    Raises
    ------
    BranchAmbiguity
        If the preimage lies within 1e-10 of a band edge or outside the
        band (``mu`` not in the image of the open band).
    """
    g = p.gamma
    w = complex(np.arccos(complex(mu) * np.sqrt(_sin_factor(p))))
    offset = w / (np.pi * g)
    edge = 1 / (2 * g)
    if offset.real > edge - 1e-10:
        raise BranchAmbiguity(
            f"mu={complex(mu)!r} has no preimage strictly inside the band "
            f"|Re sigma - Q/2| < 1/(2 gamma)",
            {"mu_re": complex(mu).real, "mu_im": complex(mu).imag,
             "distance_to_edge": edge - offset.real})
    return complex(p.Q / 2 + offset)


def g_chi(sigma, ctx, p):
    """``sin(pi gamma^2/4)^(-chi/gamma) cos(2 pi chi (sigma - Q/2))``."""
    chi = _check_chi(ctx.chi, p)
    return complex(_sin_factor(p) ** (-chi / p.gamma)
                   * np.cos(2 * np.pi * chi * (complex(sigma) - p.Q / 2)))


def conformal_dim(beta, p):
    """``Delta_beta = beta/2 (Q - beta/2)``."""
    beta = complex(beta)
    return beta / 2 * (p.Q - beta / 2)


def unit_volume_constant(p):
    """``pi (gamma/2)^(2 - gamma^2/2) Gamma(gamma^2/4) / Gamma(1 - gamma^2/4)``."""
    g = p.gamma
    return float(np.pi * (g / 2) ** (2 - g * g / 2) * special.gamma(g * g / 4)
                 / special.gamma(1 - g * g / 4))


def _log_u(p):
    return np.log(unit_volume_constant(p))


# ---------------------------------------------------------------------------
# Log-space products
# ---------------------------------------------------------------------------

def _factor_log(kind, x, p, settings):
    """(log value, state) of one factor; state is 'ok', 'zero' or 'pole'."""
    x = complex(x)
    if kind == "G2":
        if lattice_query(LatticeKind.GAMMA_POLE, x, p, POLE_GUARD):
            return None, "pole"
        return log_double_gamma(x, p, settings), "ok"
    if kind == "S":
        if lattice_query(LatticeKind.SINE_POLE, x, p, POLE_GUARD):
            return None, "pole"
        val = log_double_sine(x, p)
        return (None, "zero") if np.isneginf(val.real) else (val, "ok")
    if kind == "G":
        if _near_nonpositive_integer(x, POLE_GUARD):
            return None, "pole"
        return lngamma(x), "ok"
    raise ValueError(f"unknown factor kind {kind!r}")


_NAMES = {"G2": "double Gamma", "S": "double Sine", "G": "Gamma"}


def _log_product(p, settings, num=(), den=()):
    """Log of ``prod num / prod den``; entries are ``(kind, arg, label)``.

    Returns ``-inf`` when a numerator factor vanishes or a denominator
    factor has a pole.  A numerator pole or a denominator zero raises.
    """
    total = 0j
    vanishes = False
    for entries, sign in ((num, 1), (den, -1)):
        for kind, x, label in entries:
            val, state = _factor_log(kind, x, p, settings)
            if state == "ok":
                total += sign * val
                continue
            singular = (state == "pole") if sign > 0 else (state == "zero")
            if singular:
                where = "numerator" if sign > 0 else "denominator"
                raise PoleEncountered(
                    f"prefactor {where} factor {label} = {_NAMES[kind]}"
                    f"({complex(x):.12g}) is singular",
                    {"factor": label, "function": _NAMES[kind],
                     "x_re": complex(x).real, "x_im": complex(x).imag,
                     "state": state, "position": where})
            vanishes = True
    return complex(-np.inf, 0) if vanishes else total


def _exp(logval):
    if np.isneginf(complex(logval).real):
        return 0j
    return complex(np.exp(logval))


# ---------------------------------------------------------------------------
# Boundary three-point function
# ---------------------------------------------------------------------------

def pt_decay_rate(p):
    """Exponential decay rate of the J_PT integrand along ``Re r = const``.

    The quadratic terms of the double Sine asymptotics cancel between the
    four numerator and four denominator factors; the linear terms leave
    ``|integrand| ~ exp(-2 pi Q |Im r|)`` in both directions.
    """
    return 2 * np.pi * p.Q


def _pt_integrand(a, p):
    c, d = pt_integrand_shifts(a, p)
    c = np.array(c)[:, None]
    d = np.array(d)[:, None]

    def f(r):
        r = np.asarray(r, dtype=complex)
        flat = r.ravel()[None, :]
        logs = log_double_sine_array(np.vstack([c + flat, d + flat]), p)
        out = np.exp(logs[:4].sum(axis=0) - logs[4:].sum(axis=0))
        return out.reshape(r.shape)
    return f


def j_pt(a, p, s=DEFAULT_SETTINGS, *, base_re=None, full_output=False):
    """Contour integral ``int_C prod S(c_i + r) / prod S(d_j + r) dr/i``.

    Parameters
    ----------
    a : ThreePointArgs
    p : LiouvilleParams
    s : QuadSettings
    base_re : float, optional
        Force the real part of the integration line; residue corrections
        are added for every pole left on the wrong side.
    full_output : bool
        Return the :class:`ContourResult` instead of the value.

    Raises
    ------
    PoleCollision
        When a left and a right pole lattice overlap (a pole of J_PT).
    """
    left, right = pt_pole_seeds(a, p)
    spec = plan_contour(left, right, p, pt_decay_rate(p), s.rel_tol,
                        base_re=base_re)
    res = integrate_contour(_pt_integrand(a, p), spec, s)
    return res if full_output else res.value


def h_pt_prefactor_log(a, p, s=DEFAULT_SETTINGS):
    """Logarithm of the factor multiplying ``j_pt`` in ``h_pt``."""
    Q = p.Q
    b1, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    num = [("G2", Q - b2 / 2 + e1 * (Q - b1) / 2 + e3 * (Q - b3) / 2,
            f"G2(Q-b2/2{'+' if e1 > 0 else '-'}(Q-b1)/2"
            f"{'+' if e3 > 0 else '-'}(Q-b3)/2)")
           for e1 in (1, -1) for e3 in (1, -1)]
    den = [("S", b3 / 2 - s1 + Q - s3, "S(b3/2-s1+Q-s3)"),
           ("S", b3 / 2 - s1 + s3, "S(b3/2-s1+s3)"),
           ("S", b1 / 2 + s1 - s2, "S(b1/2+s1-s2)"),
           ("S", b1 / 2 + s1 - Q + s2, "S(b1/2+s1-Q+s2)"),
           ("G2", Q, "G2(Q)"),
           ("G2", Q - b1, "G2(Q-b1)"),
           ("G2", Q - b2, "G2(Q-b2)"),
           ("G2", Q - b3, "G2(Q-b3)")]
    expo = (2 * Q - (b1 + b2 + b3)) / (2 * p.gamma)
    return LOG_2PI + expo * _log_u(p) + _log_product(p, s, num, den)


def h_pt(a, p, s=DEFAULT_SETTINGS, *, base_re=None, full_output=False):
    """Boundary three-point structure constant.

    Returns the value, or ``(value, error_estimate)`` with ``full_output``.
    """
    pre = h_pt_prefactor_log(a, p, s)
    res = j_pt(a, p, s, base_re=base_re, full_output=True)
    scale = abs(_exp(pre))
    value = _exp(pre) * res.value if scale else 0j
    return (value, scale * res.error) if full_output else value


# ---------------------------------------------------------------------------
# Reflection coefficient
# ---------------------------------------------------------------------------

def _log_gamma2_reflected_ratio(beta, p, s):
    """log of ``G2(beta - Q) / G2(Q - beta)``, regular at ``beta = Q``.

    With ``e = beta - Q`` the b-shift equation gives
    ``G2(e)/G2(-e) = -G2(b+e) Gamma(1+b e) b^(-2 b e) / (G2(b-e) Gamma(1-b e))``.
    """
    b = p.b
    e = complex(beta) - p.Q
    num = [("G2", b + e, "G2(beta-Q+b)"), ("G", 1 + b * e, "Gamma(1+b(beta-Q))")]
    den = [("G2", b - e, "G2(Q-beta+b)"), ("G", 1 - b * e, "Gamma(1-b(beta-Q))")]
    return 1j * np.pi - 2 * b * e * np.log(b) + _log_product(p, s, num, den)


def r_fzz(a, p, s=DEFAULT_SETTINGS):
    """Boundary reflection coefficient ``R(beta, sigma1, sigma2)``."""
    Q = p.Q
    beta, s1, s2 = a.beta, a.sigma1, a.sigma2
    num = [("S", 2 * Q - s1 - s2 - beta / 2, "S(2Q-s1-s2-beta/2)"),
           ("S", s1 + s2 - beta / 2, "S(s1+s2-beta/2)")]
    den = [("S", beta / 2 + s2 - s1, "S(beta/2+s2-s1)"),
           ("S", beta / 2 - s2 + s1, "S(beta/2-s2+s1)")]
    log_r = (Q - beta) / p.gamma * _log_u(p) \
        + _log_gamma2_reflected_ratio(beta, p, s) \
        + _log_product(p, s, num, den)
    return _exp(log_r)


# ---------------------------------------------------------------------------
# Bulk-boundary function
# ---------------------------------------------------------------------------

def hos_decay_rates(a, p):
    """Decay rates (upward, downward) of the bulk-boundary integrand.

    ``|integrand| ~ exp(-4 pi (Q - Re sigma - Re beta/4) Im s)`` as
    ``Im s -> +inf`` and ``exp(-4 pi (Re sigma - Re beta/4) |Im s|)`` as
    ``Im s -> -inf``.
    """
    sr, br = a.sigma.real, a.beta.real
    return (4 * np.pi * (p.Q - sr - br / 4), 4 * np.pi * (sr - br / 4))


def _hos_integrand(a, p):
    Q = p.Q
    A = (a.alpha + a.beta / 2 - Q) / 2
    B = (a.alpha - a.beta / 2 + Q) / 2
    k = 2j * np.pi * (Q - 2 * a.sigma)
    args = np.array([A, A, B, B])[:, None]
    signs = np.array([1, -1, 1, -1])[:, None]

    def f(r):
        r = np.asarray(r, dtype=complex)
        flat = r.ravel()[None, :]
        logs = log_double_sine_array(args + signs * flat, p)
        out = np.exp(k * flat[0] + logs[0] + logs[1] - logs[2] - logs[3])
        return out.reshape(r.shape)
    return f


def j_hos(a, p, s=DEFAULT_SETTINGS, *, base_re=None, full_output=False):
    """Contour integral
    ``int_C e^(2 pi i (Q - 2 sigma) t) S(A +- t) / S(B +- t) dt/i`` with
    ``A = (alpha + beta/2 - Q)/2`` and ``B = (alpha - beta/2 + Q)/2``.

    Raises
    ------
    ConvergenceDomain
        Unless ``Re beta/2 < Q`` and ``Re beta/4 < Re sigma < Q - Re beta/4``;
        on the edges of the strip the integrand does not decay.
    """
    up, down = hos_decay_rates(a, p)
    if not (a.beta.real / 2 < p.Q and up > 0 and down > 0):
        raise ConvergenceDomain(
            "bulk-boundary contour integral needs Re beta/2 < Q and "
            "Re beta/4 < Re sigma < Q - Re beta/4",
            {"beta_re": a.beta.real, "sigma_re": a.sigma.real, "Q": p.Q})
    left, right = hos_pole_seeds(a.alpha, a.beta, p)
    spec = plan_contour(left, right, p, min(up, down), s.rel_tol,
                        base_re=base_re)
    res = integrate_contour(_hos_integrand(a, p), spec, s)
    return res if full_output else res.value


def g_hos_prefactor_log(a, p, s=DEFAULT_SETTINGS):
    """Logarithm of the factor multiplying ``j_hos`` in ``g_hos``."""
    Q = p.Q
    al, be = a.alpha, a.beta
    num = [("G2", 2 * Q - be / 2 - al, "G2(2Q-beta/2-alpha)"),
           ("G2", al - be / 2, "G2(alpha-beta/2)")] \
        + [("G2", Q - be / 2, "G2(Q-beta/2)")] * 3
    den = [("G2", Q - al, "G2(Q-alpha)"), ("G2", Q - be, "G2(Q-beta)"),
           ("G2", al, "G2(alpha)"), ("G2", Q, "G2(Q)"),
           ("G2", be / 2, "G2(beta/2)")]
    log_two = (conformal_dim(be, p) - 2 * conformal_dim(al, p)) * LOG_2
    return LOG_2PI + log_two + (Q - al - be / 2) / p.gamma * _log_u(p) \
        + _log_product(p, s, num, den)


def g_hos(a, p, s=DEFAULT_SETTINGS, *, base_re=None, full_output=False):
    """Bulk-boundary structure constant.

    Returns the value, or ``(value, error_estimate)`` with ``full_output``.
    """
    pre = g_hos_prefactor_log(a, p, s)
    res = j_hos(a, p, s, base_re=base_re, full_output=True)
    scale = abs(_exp(pre))
    value = _exp(pre) * res.value if scale else 0j
    return (value, scale * res.error) if full_output else value


# ---------------------------------------------------------------------------
# Fusion and modular kernels
# ---------------------------------------------------------------------------

def fusion_to_three_point(k, p):
    """Three-point arguments matching fusion-kernel parameters:
    ``beta = (a2', Q - iP', a3')``, ``sigma = ((Q + iP)/2, a1'/2, a4'/2)``."""
    if len(k.alpha_primes) != 4:
        raise ValueError("the fusion kernel needs four alpha' weights")
    a1, a2, a3, a4 = k.alpha_primes
    Q = p.Q
    return ThreePointArgs((a2, Q - 1j * k.P_prime, a3),
                          ((Q + 1j * k.P) / 2, a1 / 2, a4 / 2))


def three_point_to_fusion(a, p):
    """Inverse of :func:`fusion_to_three_point`."""
    Q = p.Q
    b1, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    return KernelArgs((2 * s2, b1, b3, 2 * s3), (2 * s1 - Q) / 1j,
                      (Q - b2) / 1j)


def modular_to_bulk_boundary(k, p):
    """Bulk-boundary arguments matching modular-kernel parameters:
    ``alpha = Q + iP'``, ``beta = a'``, ``sigma = (Q + iP)/2``."""
    if len(k.alpha_primes) != 1:
        raise ValueError("the modular kernel needs one alpha' weight")
    Q = p.Q
    return BulkBoundaryArgs(Q + 1j * k.P_prime, k.alpha_primes[0],
                            (Q + 1j * k.P) / 2)


def bulk_boundary_to_modular(a, p):
    """Inverse of :func:`modular_to_bulk_boundary`."""
    Q = p.Q
    return KernelArgs((a.beta,), (2 * a.sigma - Q) / 1j, (a.alpha - Q) / 1j)


def fusion_kernel(k, p, s=DEFAULT_SETTINGS):
    """Virasoro fusion kernel expressed through :func:`h_pt`."""
    a = fusion_to_three_point(k, p)
    Q = p.Q
    b1, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    pm = (1, -1)
    num = [("G2", Q, "G2(Q)"), ("G2", Q - b1, "G2(Q-b1)"),
           ("G2", Q - b3, "G2(Q-b3)"),
           ("G2", 2 * s1, "G2(2s1)"), ("G2", 2 * Q - 2 * s1, "G2(2Q-2s1)")]
    num += [("G2", b2 / 2 + e2 * (Q - 2 * s2) / 2 + e3 * (Q - 2 * s3) / 2,
             f"G2(b2/2{e2:+d}(Q-2s2)/2{e3:+d}(Q-2s3)/2)")
            for e2 in pm for e3 in pm]
    num += [("S", (Q + b2 - b3) / 2 + e * (Q - b1) / 2,
             f"S((Q+b2-b3)/2{e:+d}(Q-b1)/2)") for e in pm]
    den = [("G2", b2 - Q, "G2(b2-Q)")]
    den += [("G2", Q - b1 / 2 + e1 * (Q - 2 * s1) / 2 + e2 * (Q - 2 * s2) / 2,
             f"G2(Q-b1/2{e1:+d}(Q-2s1)/2{e2:+d}(Q-2s2)/2)")
            for e1 in pm for e2 in pm]
    den += [("G2", Q - b3 / 2 + e1 * (Q - 2 * s1) / 2 + e3 * (Q - 2 * s3) / 2,
             f"G2(Q-b3/2{e1:+d}(Q-2s1)/2{e3:+d}(Q-2s3)/2)")
            for e1 in pm for e3 in pm]
    log_pre = -LOG_2PI + (b1 + b2 + b3 - 2 * Q) / (2 * p.gamma) * _log_u(p) \
        + _log_product(p, s, num, den)
    return _exp(log_pre) * h_pt(a, p, s)


def modular_kernel(k, p, s=DEFAULT_SETTINGS):
    """Virasoro modular kernel expressed through :func:`g_hos`."""
    a = modular_to_bulk_boundary(k, p)
    g = p.gamma
    Q = p.Q
    al, be, sg = a.alpha, a.beta, a.sigma
    num = [("G2", 2 * sg, "G2(2sigma)"), ("G2", 2 * Q - 2 * sg, "G2(2Q-2sigma)"),
           ("G2", Q - be, "G2(Q-beta)"), ("G2", Q, "G2(Q)")]
    den = [("G", 2 / g * (al - Q), "Gamma(2(alpha-Q)/gamma)"),
           ("G", g * al / 4 - g * g / 4, "Gamma(gamma alpha/4-gamma^2/4)"),
           ("G2", Q - be / 2 + (2 * sg - Q), "G2(Q-beta/2+(2sigma-Q))"),
           ("G2", Q - be / 2 - (2 * sg - Q), "G2(Q-beta/2-(2sigma-Q))"),
           ("G2", Q - be / 2, "G2(Q-beta/2)"), ("G2", Q - be / 2, "G2(Q-beta/2)")]
    log_pre = np.log(np.pi / 2) + 1j * np.pi \
        + (2 * conformal_dim(al, p) - conformal_dim(be, p)) * LOG_2 \
        + ((2 / g - g / 2) * (Q - al) + 1) * np.log(g / 2) \
        + (al + be / 2 - Q) / g * _log_u(p) + _log_product(p, s, num, den)
    return _exp(log_pre) * g_hos(a, p, s)


# ---------------------------------------------------------------------------
# Position-dependent correlators
# ---------------------------------------------------------------------------

def _log_abs(x):
    return np.log(abs(x))


def boundary_3pt(s1, s2, s3, a, p, s=DEFAULT_SETTINGS):
    """Boundary three-point correlator at real positions.

    One position may be infinite; the correlator is then normalised by
    ``|s_k|^(2 Delta_k)`` for the infinite point ``s_k``, which removes the
    two position factors involving it.

    Raises
    ------
    CoincidentPoints
        If two positions coincide or more than one is infinite.
    """
    pos = [float(v) for v in (s1, s2, s3)]
    infinite = [i for i, v in enumerate(pos) if np.isinf(v)]
    if len(infinite) > 1:
        raise CoincidentPoints("at most one position may be infinite",
                               {"positions": [str(v) for v in pos]})
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if i not in infinite and j not in infinite and pos[i] == pos[j]:
            raise CoincidentPoints(f"positions s{i+1} and s{j+1} coincide",
                                   {"positions": pos})
    dims = [conformal_dim(bv, p) for bv in a.beta]
    total = sum(dims)
    log_pos = 0j
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if i in infinite or j in infinite:
            continue
        k = 3 - i - j
        log_pos += (total - 2 * dims[k]) * _log_abs(pos[i] - pos[j])
    return h_pt(a, p, s) * complex(np.exp(-log_pos))


def bulk_boundary(z, s0, alpha, beta, sigma, p, s=DEFAULT_SETTINGS):
    """Bulk-boundary correlator with the bulk point ``z`` (``Im z > 0``)
    and the boundary point ``s0``."""
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("the bulk point must lie in the upper half-plane",
                          {"z_re": z.real, "z_im": z.imag})
    d_alpha = conformal_dim(alpha, p)
    d_beta = conformal_dim(beta, p)
    log_pos = (2 * d_alpha - d_beta) * _log_abs(2j * z.imag) \
        + 2 * d_beta * _log_abs(z - float(s0))
    return g_hos(BulkBoundaryArgs(alpha, beta, sigma), p, s) \
        * complex(np.exp(-log_pos))
