r"""Numerical checks of the functional identities obeyed by the exact formulas.

Every check evaluates both sides of one identity and returns an
:class:`IdentityReport`.  The identities are equalities between meromorphic
functions, so a failing report points at the numerics (quadrature, contour
planning, special functions), not at the formulas.

Each identity is registered under a stable name together with an evaluator
that maps a flat parameter dictionary to ``(lhs, rhs, scale)``.  Reports
store exactly that dictionary, so :func:`rerun_report` reproduces any report
bit for bit.  Evaluators route every Gamma, sine and structure-constant
call through a :class:`_Tracker`; running them in dry mode records the
arguments without computing contour integrals, which is how the suite
rejects parameter draws that come too close to a pole.

Two coefficient sets differ from the printed source formulas; both
corrections were derived from identities that hold to machine precision:

* the sine-only coefficients ``f1..f4`` of the three-term relation act on
  ``J_PT / (S(b1/2 + s1 - s2) S(b1/2 + s1 + s2 - Q))`` and ``f4`` carries
  the opposite overall sign;
* the second residue of ``J_PT`` and the ratio of the two residues carry
  the opposite overall sign, and the ratio's last sine has argument
  ``-(b2 + b3 + gamma)/2 + s1 + s2``.
"""
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from .contour import (ContourSpec, hos_pole_seeds, integrate_contour,
                      pt_pole_seeds)
from .errors import DomainError, LiouvilleError, PoleEncountered
from .numerics import DEFAULT_SETTINGS, QuadSettings, extrapolate_limit
from .specialfn import (POLE_GUARD, HypParams, LatticeKind, LiouvilleParams,
                        connection_matrix_01, connection_matrix_0inf,
                        double_sine, hyp2f1, lattice_query, lngamma,
                        log_double_gamma, log_double_sine_array)
from .structure_constants import (BulkBoundaryArgs, ReflectionArgs,
                                  ShiftContext, ThreePointArgs, g_chi, g_hos,
                                  h_pt, hos_decay_rates, j_hos, j_pt, r_fzz)

__all__ = [
    "IdentityReport", "ThreeTermCoeffs", "IDENTITIES", "DEFAULT_TOLERANCES",
    "ABS_FLOOR", "RESIDUE_EPS", "HAZARD_DISTANCE", "evaluate_identity",
    "rerun_report", "check_h_shift", "check_r_shift", "check_r_vanishing",
    "check_r_combined", "check_r_composition", "check_r_reflection",
    "check_h_reflection", "check_h_residues", "three_term_coeffs",
    "check_three_term", "check_three_term_periodicity",
    "check_special_values", "check_g_residues",
    "check_sine_integral_identities", "check_hyp_connection",
    "check_specialfn_suite", "exponential_sine_integral", "draw_family",
    "FAMILIES", "run_suite",
]

ABS_FLOOR = 1e-300
RESIDUE_EPS = (0.04, 0.02, 0.01, 0.005, 0.0025)
HAZARD_DISTANCE = 0.05
SQRT2_BAND = 1e-3


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def _cx(z):
    return None if z is None else {"re": float(z.real), "im": float(z.imag)}


def _from_cx(d):
    return None if d is None else complex(d["re"], d["im"])


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    ``rel_err`` is ``|lhs - rhs|`` divided by the largest term magnitude
    (for several-term identities ``rhs`` is the sum of the remaining terms
    and ``scale`` their largest magnitude).  ``passed`` holds when
    ``rel_err <= tol``, or when both sides are below ``ABS_FLOOR`` and
    ``abs_err <= tol``.  A check that hits a singular coefficient carries
    the structured error in ``error`` and has no residual.
    """
    identity_name: str
    params: dict
    lhs: complex = None
    rhs: complex = None
    abs_err: float = None
    rel_err: float = None
    passed: bool = False
    elapsed: float = 0.0
    tol: float = None
    error: dict = None

    def to_dict(self, timings=True):
        return {
            "identity_name": self.identity_name,
            "params": {k: _cx(v) for k, v in self.params.items()},
            "lhs": _cx(self.lhs), "rhs": _cx(self.rhs),
            "abs_err": self.abs_err, "rel_err": self.rel_err,
            "pass": self.passed,
            "elapsed_s": float(self.elapsed) if timings else 0.0,
            "tol": self.tol, "error": self.error,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["identity_name"],
                   {k: _from_cx(v) for k, v in d["params"].items()},
                   _from_cx(d["lhs"]), _from_cx(d["rhs"]), d["abs_err"],
                   d["rel_err"], d["pass"], d["elapsed_s"], d.get("tol"),
                   d.get("error"))

    def params_hash(self):
        text = json.dumps({k: _cx(v) for k, v in self.params.items()},
                          sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class ThreeTermCoeffs:
    """Coefficients of ``J(b1 + 4chi) + a J(b1 + 2chi) + b J(b1) = 0``.

    ``f1..f4`` are the two-term coefficients evaluated at ``(b1, b2)``.
    """
    f1: complex
    f2: complex
    f3: complex
    f4: complex
    a_chi: complex
    b_chi: complex


def _finish(name, params, lhs, rhs, scale, tol, elapsed):
    lhs, rhs = complex(lhs), complex(rhs)
    abs_err = abs(lhs - rhs)
    denom = max(float(scale), abs(lhs), abs(rhs))
    if not np.isfinite(abs_err) or not np.isfinite(denom):
        return IdentityReport(name, params, None, None, None, None, False,
                              elapsed, tol, {"kind": "NonFiniteValue",
                                             "message": "non-finite side",
                                             "witness": {}})
    rel_err = abs_err / denom if denom > 0 else 0.0
    tiny = abs(lhs) <= ABS_FLOOR and abs(rhs) <= ABS_FLOOR
    passed = bool(rel_err <= tol or (tiny and abs_err <= tol))
    return IdentityReport(name, params, lhs, rhs, float(abs_err),
                          float(rel_err), passed, elapsed, tol)


# ---------------------------------------------------------------------------
# Evaluation tracker
# ---------------------------------------------------------------------------

class _Tracker:
    """Evaluates the ingredients of an identity and records their arguments.

    In dry mode the expensive evaluations (contour integrals, residue
    extrapolations) return 1 and only their arguments are recorded.
    """

    def __init__(self, p, settings=DEFAULT_SETTINGS, dry=False):
        self.p = p
        self.s = settings
        self.dry = dry
        self.records = []

    # elementary factors
    def gamma(self, z):
        z = complex(z)
        self.records.append(("gamma", z))
        k = min(round(z.real), 0)
        if abs(z - k) <= POLE_GUARD:
            if self.dry:
                return 1.0
            raise PoleEncountered(f"Gamma({z:.12g}) in a coefficient",
                                  {"x_re": z.real, "x_im": z.imag,
                                   "function": "Gamma"})
        return complex(np.exp(lngamma(z)))

    def rgamma(self, z):
        return complex(special.rgamma(complex(z)))

    def csc(self, x):
        """``1 / sin(pi x)``."""
        x = complex(x)
        self.records.append(("sin", x))
        if abs(x - round(x.real)) <= POLE_GUARD:
            if self.dry:
                return 1.0
            raise PoleEncountered(f"sin(pi*{x:.12g}) vanishes in a "
                                  "denominator", {"x_re": x.real,
                                                  "x_im": x.imag,
                                                  "function": "sin"})
        return 1 / np.sin(np.pi * x)

    def S(self, x):
        x = complex(x)
        self.records.append(("S", x))
        if self.dry:
            return 1.0
        return double_sine(x, self.p)

    def G2(self, x):
        x = complex(x)
        self.records.append(("G2", x))
        if self.dry:
            return 1.0
        return complex(np.exp(log_double_gamma(x, self.p, self.s)))

    # structure constants
    def h(self, a):
        self.records.append(("pt", a))
        return 1.0 if self.dry else h_pt(a, self.p, self.s)

    def j(self, a):
        self.records.append(("pt", a))
        return 1.0 if self.dry else j_pt(a, self.p, self.s)

    def r(self, a):
        self.records.append(("r", a))
        return 1.0 if self.dry else r_fzz(a, self.p, self.s)

    def ghos(self, a):
        self.records.append(("hos", a))
        return 1.0 if self.dry else g_hos(a, self.p, self.s)

    def jhos(self, a):
        self.records.append(("hos", a))
        return 1.0 if self.dry else j_hos(a, self.p, self.s)

    def limit(self, g, eps=RESIDUE_EPS):
        """Extrapolated ``g(0)``; in dry mode ``g`` is not called."""
        if self.dry:
            return 1.0
        return extrapolate_limit(g, eps)[0]

    def note(self, kind, obj):
        """Record an argument without evaluating anything."""
        self.records.append((kind, obj))


def _lat(kind, x, p):
    hit = lattice_query(kind, x, p, 1.0)
    return hit[2] if hit is not None else np.inf


def _pt_hazards(a, p):
    Q = p.Q
    b1, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    out = []
    for e1 in (1, -1):
        for e3 in (1, -1):
            x = Q - b2 / 2 + e1 * (Q - b1) / 2 + e3 * (Q - b3) / 2
            out.append(_lat(LatticeKind.GAMMA_POLE, x, p))
    for bi in a.beta:
        out.append(_lat(LatticeKind.GAMMA_POLE, Q - bi, p))
    for x in (b3 / 2 - s1 + Q - s3, b3 / 2 - s1 + s3, b1 / 2 + s1 - s2,
              b1 / 2 + s1 - Q + s2):
        out += [_lat(LatticeKind.SINE_POLE, x, p),
                _lat(LatticeKind.SINE_ZERO, x, p)]
    left, right = pt_pole_seeds(a, p)
    for lt in left:
        for rt in right:
            out.append(_lat(LatticeKind.GAMMA_POLE, rt.seed - lt.seed, p))
    return out


def _r_hazards(a, p):
    Q, b = p.Q, p.b
    be, s1, s2 = a.beta, a.sigma1, a.sigma2
    out = []
    for x in (2 * Q - s1 - s2 - be / 2, s1 + s2 - be / 2, be / 2 + s2 - s1,
              be / 2 - s2 + s1):
        out += [_lat(LatticeKind.SINE_POLE, x, p),
                _lat(LatticeKind.SINE_ZERO, x, p)]
    e = be - Q
    out += [_lat(LatticeKind.GAMMA_POLE, b + e, p),
            _lat(LatticeKind.GAMMA_POLE, b - e, p)]
    for z in (1 + b * e, 1 - b * e):
        out.append(abs(z - min(round(z.real), 0)))
    return out


def _hos_hazards(a, p):
    Q = p.Q
    out = list(np.array(hos_decay_rates(a, p)) / (4 * np.pi))
    out.append(Q - a.beta.real / 2)
    left, right = hos_pole_seeds(a.alpha, a.beta, p)
    for lt in left:
        for rt in right:
            out.append(_lat(LatticeKind.GAMMA_POLE, rt.seed - lt.seed, p))
    al, be = a.alpha, a.beta
    for x in (2 * Q - be / 2 - al, al - be / 2, Q - be / 2, Q - al, Q - be,
              al, be / 2):
        out.append(_lat(LatticeKind.GAMMA_POLE, x, p))
    return out


def _hazard_distance(records, p):
    """Smallest distance from any recorded argument to its singular set."""
    dists = [np.inf]
    for kind, x in records:
        if kind == "gamma":
            dists.append(abs(x - min(round(x.real), 0)))
        elif kind == "sin":
            dists.append(abs(x - round(x.real)))
        elif kind == "S":
            dists += [_lat(LatticeKind.SINE_POLE, x, p),
                      _lat(LatticeKind.SINE_ZERO, x, p)]
        elif kind == "G2":
            dists.append(_lat(LatticeKind.GAMMA_POLE, x, p))
        elif kind == "pt":
            dists += _pt_hazards(x, p)
        elif kind == "r":
            dists += _r_hazards(x, p)
        elif kind == "hos":
            dists += _hos_hazards(x, p)
        elif kind == "margin":
            dists.append(float(x))
    return float(min(dists))


# ---------------------------------------------------------------------------
# Parameter helpers
# ---------------------------------------------------------------------------

def _three_point_params(p, a, **extra):
    out = {"gamma": complex(p.gamma)}
    out.update({k: complex(v) for k, v in extra.items()})
    out.update({f"beta{i + 1}": complex(v) for i, v in enumerate(a.beta)})
    out.update({f"sigma{i + 1}": complex(v) for i, v in enumerate(a.sigma)})
    return out


def _unpack_three_point(P):
    return ThreePointArgs((P["beta1"], P["beta2"], P["beta3"]),
                          (P["sigma1"], P["sigma2"], P["sigma3"]))


def _params(P):
    return LiouvilleParams(P["gamma"].real)


def _chi(P, p):
    return ShiftContext.build(P["chi"].real, (0, 0, 0), p).chi


def _sinpi(x):
    return np.sin(np.pi * complex(x))


# ---------------------------------------------------------------------------
# Shift equations of the three-point function
# ---------------------------------------------------------------------------

def _h_shift_common(P, trk):
    p = trk.p
    g, Q = p.gamma, p.Q
    chi = _chi(P, p)
    a = _unpack_three_point(P)
    b1, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    ctx = ShiftContext.build(chi, a.beta, p)
    qh = ctx.q * g / 2
    K = chi ** 2 * np.pi ** (2 * chi / g) \
        / special.gamma(1 - g * g / 4) ** (2 * chi / g)

    def gc(x):
        return g_chi(x, ctx, p)
    shifted = (s1, s2 + chi / 2, s3)
    return p, g, Q, chi, a, b1, b2, b3, s1, s2, s3, qh, K, gc, shifted


def _eval_h_shift_1(P, trk):
    p, g, Q, chi, a, b1, b2, b3, s1, s2, s3, qh, K, gc, sh = \
        _h_shift_common(P, trk)
    c1 = trk.gamma(chi * (b1 - chi)) * trk.gamma(1 - chi * b2 + chi ** 2) \
        * trk.rgamma(chi * (b1 - chi + qh)) \
        * trk.rgamma(1 - chi * b2 + chi ** 2 - qh * chi)
    c2 = K * trk.gamma(1 - chi * b1) * trk.gamma(1 - chi * b2 + chi ** 2) \
        * (gc(s1) - gc(s2 + b1 / 2)) * trk.csc(chi * (chi - b1)) \
        * trk.rgamma(1 + qh * chi) \
        * trk.rgamma(2 - chi * (b1 + b2 - 2 * chi + qh))
    lhs = trk.h(ThreePointArgs((b1, b2 - chi, b3), a.sigma))
    t1 = c1 * trk.h(ThreePointArgs((b1 - chi, b2, b3), sh))
    t2 = c2 * trk.h(ThreePointArgs((b1 + chi, b2, b3), sh))
    return lhs, t1 + t2, max(abs(lhs), abs(t1), abs(t2))


def _eval_h_shift_2(P, trk):
    p, g, Q, chi, a, b1, b2, b3, s1, s2, s3, qh, K, gc, sh = \
        _h_shift_common(P, trk)
    c0 = K / np.pi * trk.gamma(1 - chi * b2) * (gc(s3) - gc(s2 + b2 / 2))
    d1 = trk.gamma(chi * (b1 - chi)) * trk.rgamma(-qh * chi) \
        * trk.rgamma(-1 + chi * (b1 + b2 - 2 * chi + qh))
    d2 = K * (gc(s1) - gc(s2 - b1 / 2 + chi / 2)) * trk.gamma(1 - chi * b1) \
        * trk.csc(chi * (chi - b1)) * trk.rgamma(1 - chi * (b1 - chi + qh)) \
        * trk.rgamma(chi * b2 - chi ** 2 + qh * chi)
    lhs = c0 * trk.h(ThreePointArgs((b1, b2 + chi, b3), sh))
    t1 = d1 * trk.h(ThreePointArgs((b1 - chi, b2, b3), a.sigma))
    t2 = d2 * trk.h(ThreePointArgs((b1 + chi, b2, b3), a.sigma))
    return lhs, t1 + t2, max(abs(lhs), abs(t1), abs(t2))


# ---------------------------------------------------------------------------
# Reflection coefficient
# ---------------------------------------------------------------------------

def _r_shift_constant(chi, p, trk):
    g = p.gamma
    if abs(chi - g / 2) < 1e-15:
        return -trk.rgamma(-g * g / 4)
    return 4 / g ** 2 * np.pi ** (4 / g ** 2 - 1) \
        * special.gamma(1 - g * g / 4) ** (-4 / g ** 2)


def _r_shift_coeff(chi, beta, s1, s2, sign, p, trk):
    """Right side of the chi-shift of R with ``s1 -> s1 + sign chi/2``."""
    ctx = ShiftContext(chi, 0j)
    return _r_shift_constant(chi, p, trk) \
        * trk.gamma(-1 + chi * beta - chi ** 2) * trk.gamma(1 - chi * beta) \
        * (g_chi(s2, ctx, p) - g_chi(s1 + sign * beta / 2, ctx, p))


def _eval_r_shift(sign):
    def ev(P, trk):
        p = trk.p
        chi = _chi(P, p)
        be, s1, s2 = P["beta"], P["sigma1"], P["sigma2"]
        lhs = trk.r(ReflectionArgs(be, s1, s2)) \
            / trk.r(ReflectionArgs(be + chi, s1 + sign * chi / 2, s2))
        rhs = _r_shift_coeff(chi, be, s1, s2, sign, p, trk)
        return lhs, rhs, 0.0
    return ev


def _eval_r_vanishing(P, trk):
    be, s1 = P["beta"], P["sigma1"]
    # the zero itself sits on a lattice by construction; only the
    # reference point used for the scale is recorded
    value = 0j if trk.dry else r_fzz(ReflectionArgs(be, s1, s1 - be / 2),
                                    trk.p, trk.s)
    scale = trk.r(ReflectionArgs(be, s1, s1 - be / 2 + 0.1))
    return value, 0j, abs(scale)


def _r_combined_rhs(be, s1, s2, p, trk):
    g, Q = p.gamma, p.Q
    x = g * be / 2
    gam = trk.gamma(-1 + x - g * g / 4) * trk.gamma(1 - x - g * g / 4) \
        * trk.gamma(1 - x) * trk.gamma(-1 + x)
    sines = 4 * np.prod([_sinpi(g / 2 * v) for v in (
        be / 2 - s1 - s2 + Q, be / 2 + s1 + s2 - Q, be / 2 + s2 - s1,
        be / 2 + s1 - s2)])
    return (g / 2) ** 4 * gam * sines \
        / (np.sin(np.pi * g * g / 4) * special.gamma(1 - g * g / 4) ** 2)


def _eval_r_combined(P, trk):
    p = trk.p
    be, s1, s2 = P["beta"], P["sigma1"], P["sigma2"]
    lhs = trk.r(ReflectionArgs(be, s1, s2)) \
        / trk.r(ReflectionArgs(be + p.gamma, s1, s2))
    return lhs, _r_combined_rhs(be, s1, s2, p, trk), 0.0


def _eval_r_composition(P, trk):
    p = trk.p
    chi = p.gamma / 2
    be, s1, s2 = P["beta"], P["sigma1"], P["sigma2"]
    # beta -> beta + chi with s1 -> s1 - chi/2, then back with s1 + chi/2
    lhs = _r_shift_coeff(chi, be, s1, s2, -1, p, trk) \
        * _r_shift_coeff(chi, be + chi, s1 - chi / 2, s2, 1, p, trk)
    return lhs, _r_combined_rhs(be, s1, s2, p, trk), 0.0


def _eval_r_reflection(P, trk):
    p = trk.p
    be, s1, s2 = P["beta"], P["sigma1"], P["sigma2"]
    lhs = trk.r(ReflectionArgs(be, s1, s2)) \
        * trk.r(ReflectionArgs(2 * p.Q - be, s1, s2))
    return lhs, 1.0, 0.0


def _eval_h_reflection(P, trk):
    p = trk.p
    a = _unpack_three_point(P)
    b1 = a.beta[0]
    lhs = trk.h(a)
    rhs = trk.r(ReflectionArgs(b1, a.sigma[0], a.sigma[1])) \
        * trk.h(a.with_beta1(2 * p.Q - b1))
    return lhs, rhs, 0.0


def _eval_j_reflection(P, trk):
    p = trk.p
    a = _unpack_three_point(P)
    lhs = trk.j(a)
    # the reflected side uses a ten times tighter tolerance so that the
    # two evaluations do not share quadrature nodes
    sub = _Tracker(p, trk.s.scaled(0.1), trk.dry)
    rhs = sub.j(a.with_beta1(2 * p.Q - a.beta[0]))
    trk.records += sub.records
    return lhs, rhs, 0.0


def _r_gamma_closed_form(s1, s2, p, trk):
    g, Q = p.gamma, p.Q
    base = np.pi * special.gamma(g * g / 4) / special.gamma(1 - g * g / 4)
    num = np.cos(4 * np.pi / g * (s1 - Q / 2)) \
        - np.cos(4 * np.pi / g * (s2 - Q / 2))
    den = np.cos(g * np.pi * (s1 - Q / 2)) - np.cos(g * np.pi * (s2 - Q / 2))
    trk.note("margin", abs(den))
    return base ** (2 / g ** 2 - 0.5) * trk.gamma(1 - 4 / g ** 2) \
        / special.gamma(1 - g * g / 4) * num / den


def _eval_r_special_q(P, trk):
    p = trk.p
    return trk.r(ReflectionArgs(p.Q, P["sigma1"], P["sigma2"])), -1.0, 0.0


def _eval_r_special_gamma(P, trk):
    p = trk.p
    s1, s2 = P["sigma1"], P["sigma2"]
    lhs = trk.r(ReflectionArgs(p.gamma, s1, s2))
    return lhs, _r_gamma_closed_form(s1, s2, p, trk), 0.0


# ---------------------------------------------------------------------------
# Residues
# ---------------------------------------------------------------------------

def _lattice_distances(y, p, reach=4.0):
    """Sorted distances from ``y`` to ``{n gamma/2 + 2m/gamma}``."""
    b = p.b
    n = np.arange(int((abs(y) + reach) / b) + 1)
    m = np.arange(int((abs(y) + reach) * b) + 1)
    pts = (n[:, None] * b + m[None, :] / b).ravel()
    return np.sort(np.abs(y - pts))


def _beta1_clearance(a, beta1, p):
    """Half the distance in ``beta1`` from ``beta1`` to the nearest
    singularity of ``H_PT`` other than one sitting exactly at ``beta1``.

    Covers the pole list of the contour integral, the double-Gamma factors
    of the prefactor and the zeros of its double-Sine denominators.
    """
    Q = p.Q
    _, b2, b3 = a.beta
    s1, s2, _ = a.sigma
    h = complex(beta1) / 2
    # each entry is singular when it lies on {n gamma/2 + 2m/gamma}
    exprs = [h - s1 - s2, Q - h - s1 - s2, -Q + s2 + h - s1, s2 - s1 - h,
             h - b2 / 2 - b3 / 2, Q - h - b2 / 2 - b3 / 2,
             -Q + h - b2 / 2 + b3 / 2, b3 / 2 - h - b2 / 2,
             h + s1 - s2 - Q, h + s1 - Q + s2 - Q]
    exprs += [-(Q - b2 / 2 + e1 * (Q / 2 - h) + e3 * (Q - b3) / 2)
              for e1 in (1, -1) for e3 in (1, -1)]
    best = np.inf
    for y in exprs:
        d = _lattice_distances(complex(y), p)
        best = min(best, d[1] if d[0] < 1e-9 else d[0])
    return float(best)


def _residue_setup(P, trk):
    p = trk.p
    a = _unpack_three_point(P)
    beta0 = 2 * p.Q - a.beta[1] - a.beta[2]
    # representative points a finite distance from the collapsing pair
    for off in (0.25, -p.gamma + 0.25):
        trk.note("pt", a.with_beta1(beta0 + off))
    # every other singularity in beta1 must stay well outside the
    # extrapolation range
    for lim in (beta0, beta0 - p.gamma):
        trk.note("margin", _beta1_clearance(a, lim, p) - 0.1)
    return p, a, beta0


def _eval_h_residue_1(P, trk):
    p, a, beta0 = _residue_setup(P, trk)
    lim = trk.limit(lambda e: e / 2 * h_pt(a.with_beta1(beta0 + e), p, trk.s))
    return lim, 1.0, 0.0


def _h_residue_2_rhs(a, p, trk):
    g, Q = p.gamma, p.Q
    _, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    trig = np.cos(np.pi * g * (s1 - Q / 2)) * _sinpi(g * b2 / 2) \
        + np.cos(np.pi * g * (s2 - Q / 2)) * _sinpi(g * b3 / 2) \
        - np.cos(np.pi * g * (s3 - Q / 2)) * _sinpi(g * (b2 + b3) / 2)
    return -1 / np.pi / np.sqrt(np.sin(np.pi * g * g / 4)) \
        * trk.gamma(1 - g * b2 / 2) * trk.gamma(1 - g * b3 / 2) \
        * trk.gamma(g * b2 / 2 + g * b3 / 2 - 1) * trig


def _eval_h_residue_2(P, trk):
    p, a, beta0 = _residue_setup(P, trk)
    g = p.gamma
    lim = trk.limit(
        lambda e: e / 2 * h_pt(a.with_beta1(beta0 - g + e), p, trk.s))
    return lim, _h_residue_2_rhs(a, p, trk), 0.0


def _pt_trig(a, p):
    g = p.gamma
    _, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    return _sinpi(g * b2 / 2) * np.cos(g * np.pi / 2 * (-g / 2 + 2 * s1)) \
        + _sinpi(g * b3 / 2) * np.cos(g * np.pi / 2 * (-g / 2 + 2 * s2)) \
        - _sinpi(g * (b2 + b3) / 2) * np.cos(g * np.pi / 2 * (-g / 2 + 2 * s3))


def _eval_j_residue_ratio(P, trk):
    p, a, beta0 = _residue_setup(P, trk)
    g, Q = p.gamma, p.Q
    _, b2, b3 = a.beta
    s1, s2, s3 = a.sigma
    first = trk.limit(
        lambda e: e / 2 * j_pt(a.with_beta1(beta0 + e), p, trk.s))
    second = trk.limit(
        lambda e: e / 2 * j_pt(a.with_beta1(beta0 - g + e), p, trk.s))
    lhs = second / first
    rhs = 1 / (2 * np.sin(np.pi * g * g / 4)) \
        * _sinpi(g / 2 * (Q + 2 / g - b2 - b3)) \
        * trk.csc(g / 2 * (2 / g - b3)) \
        * trk.csc(g / 2 * (2 / g - (b2 + b3) / 2 + s1 - s2)) \
        * trk.csc(g / 2 * (-(b2 + b3 + g) / 2 + s1 + s2)) * _pt_trig(a, p)
    return lhs, rhs, 0.0


def _eval_g_residue(P, trk):
    p = trk.p
    Q = p.Q
    be, sg = P["beta"], P["sigma"]
    a0 = Q - be / 2
    trk.note("hos", BulkBoundaryArgs(a0 + 0.25, be, sg))
    lim = trk.limit(
        lambda e: e * g_hos(BulkBoundaryArgs(a0 + e, be, sg), p, trk.s))
    return lim, 2 ** (-(Q - be / 2) ** 2 / 2), 0.0


def _eval_j_hos_residue(P, trk):
    p = trk.p
    Q = p.Q
    be, sg = P["beta"], P["sigma"]
    a0 = Q - be / 2
    trk.note("hos", BulkBoundaryArgs(a0 + 0.25, be, sg))
    lim = trk.limit(
        lambda e: e * j_hos(BulkBoundaryArgs(a0 + e, be, sg), p, trk.s))
    return lim, 1 / (2 * np.pi * trk.S(Q - be / 2) ** 2), 0.0


# ---------------------------------------------------------------------------
# Three-term relation in beta1
# ---------------------------------------------------------------------------

def _f_coeffs(chi, b1, b2, b3, sig, p, trk):
    s1, s2, s3 = sig
    Q = p.Q
    bb = b1 + b2 + b3
    f1 = trk.csc(chi * (b1 - chi)) / 2
    f2 = 2 * _sinpi(chi * (b1 / 2 + s1 + s2 - Q)) \
        * _sinpi(chi * (b1 / 2 - s1 + s2)) * trk.csc(chi * (chi - b1))
    d = trk.csc(chi * (b1 - chi)) * trk.csc(chi * (b2 / 2 + s2 + s3 - Q)) \
        * trk.csc(chi * (b2 / 2 + s2 - s3))
    f3 = _sinpi(chi * (1.5 * chi - bb / 2)) \
        * _sinpi(chi / 2 * (b1 - chi + b2 - b3)) * d / 2
    f4 = -2 * _sinpi(chi / 2 * (b3 - chi + b1 - b2)) \
        * _sinpi(chi / 2 * (b3 - chi - b1 + b2)) \
        * _sinpi(chi * ((b1 - chi) / 2 - s1 - s2 + Q)) \
        * _sinpi(chi * ((b1 - chi) / 2 + s1 - s2)) * d
    return f1, f2, f3, f4


def _three_term(chi, b1, a, p, trk):
    _, b2, b3 = a.beta
    sig = a.sigma

    def f(x, y):
        return _f_coeffs(chi, x, y, b3, sig, p, trk)
    A = f(b1 + 2 * chi, b2 + chi)
    B = f(b1 + chi, b2)
    C = f(b1 + 3 * chi, b2)
    den = A[1] * C[3]
    trk.note("margin", abs(den))
    a_chi = (-1 + A[0] * B[3] + A[1] * C[2]) / den
    b_chi = A[0] * B[2] / den
    f1, f2, f3, f4 = f(b1, b2)
    return ThreeTermCoeffs(f1, f2, f3, f4, a_chi, b_chi)


def three_term_coeffs(chi, beta1, fixed, p):
    """Coefficients of the three-term relation in ``beta1``.

    Parameters
    ----------
    chi : float
        ``gamma/2`` or ``2/gamma``.
    beta1 : complex
    fixed : ThreePointArgs
        Supplies ``beta2, beta3`` and the three ``sigma``; its ``beta1``
        is ignored.
    p : LiouvilleParams
    """
    chi = ShiftContext.build(chi, (0, 0, 0), p).chi
    return _three_term(chi, complex(beta1), fixed, p, _Tracker(p))


def _j_normalized(a, p, trk):
    """``J_PT`` divided by ``S(b1/2 + s1 - s2) S(b1/2 + s1 + s2 - Q)``, the
    normalisation on which the sine-only coefficients act."""
    b1 = a.beta[0]
    s1, s2, _ = a.sigma
    return trk.j(a) / (trk.S(b1 / 2 + s1 - s2) * trk.S(b1 / 2 + s1 + s2 - p.Q))


def _eval_three_term(P, trk):
    p = trk.p
    chi = _chi(P, p)
    a = _unpack_three_point(P)
    b1 = a.beta[0]
    c = _three_term(chi, b1, a, p, trk)
    t4 = _j_normalized(a.with_beta1(b1 + 4 * chi), p, trk)
    t2 = c.a_chi * _j_normalized(a.with_beta1(b1 + 2 * chi), p, trk)
    t0 = c.b_chi * _j_normalized(a, p, trk)
    return t4, -(t2 + t0), max(abs(t4), abs(t2), abs(t0))


def _eval_periodicity(which):
    def ev(P, trk):
        p = trk.p
        chi = _chi(P, p)
        a = _unpack_three_point(P)
        b1 = a.beta[0]
        c0 = _three_term(chi, b1, a, p, trk)
        c1 = _three_term(chi, b1 + 2 / chi, a, p, trk)
        return getattr(c1, which), getattr(c0, which), 0.0
    return ev


# ---------------------------------------------------------------------------
# Double-sine integral identities
# ---------------------------------------------------------------------------

def exponential_sine_integral(ap, bp, p, s=DEFAULT_SETTINGS):
    r"""``int_{iR} e^(2 pi i t bp) e^(i pi t (ap - Q)) S(t + ap)/S(t + Q) dt``.

    The contour separates the poles ``t = -ap - n gamma/2 - 2m/gamma`` from
    ``t = n gamma/2 + 2m/gamma``.  The integrand decays like
    ``exp(-2 pi Re(bp) y)`` upward and like ``exp(-2 pi Re(Q - ap - bp) |y|)``
    downward.  When the downward rate is small or negative the leading
    asymptotic ``C exp(2 pi i t c)``, ``c = ap + bp - Q``, is subtracted on
    the lower half-line and its integral is added back in closed form,
    which continues the result analytically past ``Re(ap + bp) = Q``.

    The continued integrand grows like ``exp(2 pi Re(c) |y|)`` while the
    remainder decays like ``exp(-2 pi (m - Re c) |y|)``, ``m = min(gamma/2,
    2/gamma)``; rounding in the growing term limits the continuation to
    ``Re c < m/3``.

    Raises
    ------
    ConvergenceDomain
        Unless ``Re ap > 0``, ``Re bp > 0`` and ``Re(ap + bp - Q) < m/3``.
    """
    from .errors import ConvergenceDomain
    ap, bp = complex(ap), complex(bp)
    Q, b = p.Q, p.b
    c = ap + bp - Q
    small = min(b, 1 / b)
    if not (ap.real > 0 and bp.real > 0 and c.real < small / 3):
        raise ConvergenceDomain(
            "exponential double-sine integral needs Re ap > 0, Re bp > 0 and "
            "Re(ap + bp - Q) < min(b, 1/b)/3",
            {"ap_re": ap.real, "bp_re": bp.real, "c_re": c.real})
    if abs(c) < 1e-3 and c.real > -0.5:
        raise ConvergenceDomain("ap + bp too close to Q for the "
                                "asymptotic subtraction", {"c_re": c.real})
    x0 = -ap.real / 2
    subtract = c.real > -0.5
    amp = np.exp(-1j * np.pi * ap * (Q - ap) / 2)

    def f(t):
        t = np.asarray(t, dtype=complex)
        logs = log_double_sine_array(np.vstack([t + ap, t + Q]), p)
        val = np.exp(2j * np.pi * t * bp + 1j * np.pi * t * (ap - Q)
                     + logs[0] - logs[1])
        if subtract:
            val = val - np.where(t.imag < 0,
                                 amp * np.exp(2j * np.pi * t * c), 0)
        return val

    down = 2 * np.pi * (small - c.real) if subtract else -2 * np.pi * c.real
    rate = min(2 * np.pi * bp.real, down)
    # The lower-line remainder is a difference of two growing terms, so
    # its sampled magnitude bottoms out at rounding level; the truncation
    # height comes from the known rates instead of an adaptive search.
    # The subtracted integrand carries rounding noise of about 1e-12 times
    # the growing asymptotic term, so the quadrature tolerance is capped.
    # The height targets a 1e-11 tail and is a multiple of 0.5 so that the
    # jump at y = 0 falls on a panel boundary.
    height = np.ceil(2 * (np.log(1e11) / rate + 1.0)) / 2
    if subtract:
        grown = abs(amp * np.exp(2j * np.pi * (x0 - 1j * height) * c))
        s = QuadSettings(max(s.rel_tol, 1e-9),
                         max(s.abs_tol, 1e-11, 1e-12 * height * grown),
                         s.max_subdivisions)
    res = integrate_contour(f, ContourSpec(base_re=x0, decay_rate=rate,
                                           trunc_height=height), s)
    value = res.value
    if subtract:
        # int_{-inf}^0 amp exp(2 pi i (x0 + i y) c) dy, continued in c
        value += amp * np.exp(2j * np.pi * x0 * c) / (-2 * np.pi * c)
    return 1j * value


def _eval_sine_exponential(P, trk):
    p = trk.p
    Q = p.Q
    ap, bp = P["alpha_p"], P["beta_p"]
    trk.note("margin", min(ap.real, bp.real, min(p.b, 1 / p.b) / 3
                           - (ap + bp - Q).real))
    lhs = 1.0 if trk.dry else exponential_sine_integral(ap, bp, p, trk.s)
    rhs = 1j * np.exp(1j * np.pi * ap * (Q - ap) / 2) \
        * np.exp(-1j * np.pi * ap * bp) * trk.S(ap) * trk.S(bp) \
        / trk.S(ap + bp)
    return lhs, rhs, 0.0


def _eval_sine_kernel_swap(P, trk):
    p = trk.p
    Q = p.Q
    al, be, sg = P["alpha"], P["beta"], P["sigma"]
    lhs = trk.jhos(BulkBoundaryArgs(2 * sg, 2 * Q - be, al / 2))
    rhs = trk.S(Q - be / 2) / trk.S(be / 2) \
        * trk.jhos(BulkBoundaryArgs(al, be, sg))
    return lhs, rhs, 0.0


# ---------------------------------------------------------------------------
# Hypergeometric connection formulas
# ---------------------------------------------------------------------------

def _hyp_ode(h, t0, t1, y0):
    A, B, C = h.A, h.B, h.C

    def rhs(t, y):
        u, du = y
        return [du, (A * B * u - (C - (A + B + 1) * t) * du) / (t * (1 - t))]
    sol = solve_ivp(rhs, (t0, t1), np.asarray(y0, complex), method="DOP853",
                    rtol=1e-13, atol=1e-15)
    if not sol.success:
        raise DomainError("ODE integration failed", {"message": sol.message})
    return complex(sol.y[0, -1])


def _pair_at_zero(h, c1, c2, t):
    """Value and derivative of ``c1 F(A,B;C;t) + c2 |t|^(1-C) F(...)``."""
    A, B, C = h.A, h.B, h.C
    at = abs(t)
    sgn = np.sign(t)
    F = hyp2f1(h, t)
    dF = A * B / C * hyp2f1(HypParams(A + 1, B + 1, C + 1), t)
    h2 = HypParams(1 + A - C, 1 + B - C, 2 - C)
    F2 = hyp2f1(h2, t)
    dF2 = h2.A * h2.B / h2.C * hyp2f1(HypParams(h2.A + 1, h2.B + 1,
                                                h2.C + 1), t)
    pw = at ** (1 - C)
    dpw = sgn * (1 - C) * at ** (-C)
    return c1 * F + c2 * pw * F2, c1 * dF + c2 * (dpw * F2 + pw * dF2)


def _hyp_params(P):
    h = HypParams(P["A"], P["B"], P["C"])
    return h, P["c1"], P["c2"]


def _eval_hyp_01(P, trk):
    h, c1, c2 = _hyp_params(P)
    A, B, C = h.A, h.B, h.C
    t0, t1 = 0.1, 0.9
    lhs = _hyp_ode(h, t0, t1, _pair_at_zero(h, c1, c2, t0))
    B1, B2 = connection_matrix_01(h) @ np.array([c1, c2])
    s = 1 - t1
    rhs = B1 * hyp2f1(HypParams(A, B, 1 + A + B - C), s) \
        + B2 * s ** (C - A - B) * hyp2f1(HypParams(C - A, C - B,
                                                   1 + C - A - B), s)
    return lhs, rhs, 0.0


def _eval_hyp_0inf(P, trk):
    h, c1, c2 = _hyp_params(P)
    A, B, C = h.A, h.B, h.C
    t0, t1 = -0.1, -5.0
    lhs = _hyp_ode(h, t0, t1, _pair_at_zero(h, c1, c2, t0))
    D1, D2 = np.linalg.solve(connection_matrix_0inf(h), np.array([c1, c2]))
    w, at = 1 / t1, abs(t1)
    rhs = D1 * at ** (-A) * hyp2f1(HypParams(A, 1 + A - C, 1 + A - B), w) \
        + D2 * at ** (-B) * hyp2f1(HypParams(B, 1 + B - C, 1 + B - A), w)
    return lhs, rhs, 0.0


# ---------------------------------------------------------------------------
# Special-function identities
# ---------------------------------------------------------------------------

def _ldg(x, trk):
    trk.note("G2", x)
    return log_double_gamma(x, trk.p, trk.s)


def _eval_dgamma_shift(chi_of):
    def ev(P, trk):
        p = trk.p
        chi = chi_of(p)
        x = P["x"]
        lhs = np.exp(_ldg(x, trk) - _ldg(x + chi, trk))
        rhs = trk.gamma(chi * x) * chi ** (-chi * x + 0.5) / np.sqrt(2 * np.pi)
        return lhs, rhs, 0.0
    return ev


def _eval_dsine_inversion(P, trk):
    x = P["x"]
    return trk.S(x) * trk.S(trk.p.Q - x), 1.0, 0.0


def _eval_dsine_shift(chi_of):
    def ev(P, trk):
        chi = chi_of(trk.p)
        x = P["x"]
        return trk.S(x + chi) / trk.S(x), 2 * _sinpi(chi * x), 0.0
    return ev


def _eval_dgamma_unit(P, trk):
    return np.exp(_ldg(trk.p.Q / 2, trk)), 1.0, 0.0


def _eval_dgamma_q_ratio(P, trk):
    g = trk.p.gamma
    lhs = np.exp(_ldg(trk.p.Q, trk) - _ldg(2 / g, trk))
    return lhs, np.sqrt(2 * np.pi) * np.sqrt(g / 2), 0.0


def _eval_lngamma_reflection(P, trk):
    A = P["A"]
    return trk.gamma(A) * trk.gamma(1 - A), np.pi * trk.csc(A), 0.0


def _eval_lngamma_duplication(P, trk):
    A = P["A"]
    lhs = trk.gamma(A) * trk.gamma(A + 0.5)
    return lhs, 2 ** (1 - 2 * A) * np.sqrt(np.pi) * trk.gamma(2 * A), 0.0


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _half(p):
    return p.gamma / 2


def _inv(p):
    return 2 / p.gamma


@dataclass(frozen=True)
class _Identity:
    evaluate: object
    tol: float
    description: str


IDENTITIES = {
    "h_shift_1": _Identity(_eval_h_shift_1, 1e-6,
                           "H(b1, b2-chi) = c1 H(b1-chi, b2; s2+chi/2) + "
                           "c2 H(b1+chi, b2; s2+chi/2)"),
    "h_shift_2": _Identity(_eval_h_shift_2, 1e-6,
                           "c0 H(b1, b2+chi; s2+chi/2) = d1 H(b1-chi, b2) + "
                           "d2 H(b1+chi, b2)"),
    "r_shift_1": _Identity(_eval_r_shift(-1), 1e-9,
                           "R(b, s1, s2)/R(b+chi, s1-chi/2, s2) = "
                           "c Gamma Gamma (g(s2) - g(s1-b/2))"),
    "r_shift_2": _Identity(_eval_r_shift(1), 1e-9,
                           "R(b, s1, s2)/R(b+chi, s1+chi/2, s2) = "
                           "c Gamma Gamma (g(s2) - g(s1+b/2))"),
    "r_shift_vanishing": _Identity(_eval_r_vanishing, 1e-9,
                                   "R(b, s1, s1-b/2) = 0"),
    "r_combined": _Identity(_eval_r_combined, 1e-8,
                            "R(b)/R(b+gamma) = Gamma product x four sines"),
    "r_composition": _Identity(_eval_r_composition, 1e-10,
                               "two gamma/2 shift coefficients compose to "
                               "the gamma-shift coefficient"),
    "r_reflection": _Identity(_eval_r_reflection, 1e-10,
                              "R(b) R(2Q-b) = 1"),
    "h_reflection": _Identity(_eval_h_reflection, 1e-7,
                              "H(b1) = R(b1, s1, s2) H(2Q-b1)"),
    "j_reflection": _Identity(_eval_j_reflection, 1e-7,
                              "J_PT(b1) = J_PT(2Q-b1)"),
    "r_special_q": _Identity(_eval_r_special_q, 1e-9, "R(Q) = -1"),
    "r_special_gamma": _Identity(_eval_r_special_gamma, 1e-9,
                                 "R(gamma, s1, s2) closed form"),
    "h_residue_1": _Identity(_eval_h_residue_1, 1e-5,
                             "(bbar/2 - Q) H -> 1 at b1 = 2Q-b2-b3"),
    "h_residue_2": _Identity(_eval_h_residue_2, 1e-5,
                             "(bbar/2 - Q + gamma/2) H at b1 = 2Q-b2-b3-gamma"),
    "j_residue_ratio": _Identity(_eval_j_residue_ratio, 1e-5,
                                 "ratio of the two J_PT residues"),
    "three_term": _Identity(_eval_three_term, 1e-5,
                            "J(b1+4chi) + a J(b1+2chi) + b J(b1) = 0"),
    "three_term_periodicity_a": _Identity(_eval_periodicity("a_chi"), 1e-12,
                                          "a_chi(b1 + 2/chi) = a_chi(b1)"),
    "three_term_periodicity_b": _Identity(_eval_periodicity("b_chi"), 1e-12,
                                          "b_chi(b1 + 2/chi) = b_chi(b1)"),
    "g_hos_residue": _Identity(_eval_g_residue, 1e-5,
                               "(alpha + b/2 - Q) G -> 2^(-(Q-b/2)^2/2)"),
    "j_hos_residue": _Identity(_eval_j_hos_residue, 1e-5,
                               "(alpha + b/2 - Q) J_Hos -> "
                               "1/(2 pi S(Q-b/2)^2)"),
    "sine_integral_exponential": _Identity(
        _eval_sine_exponential, 1e-6,
        "int e^(2 pi i t b') e^(i pi t (a'-Q)) S(t+a')/S(t+Q) dt = "
        "closed form"),
    "sine_integral_kernel_swap": _Identity(
        _eval_sine_kernel_swap, 1e-6,
        "J_Hos(2s, 2Q-b, a/2) = S(Q-b/2)/S(b/2) J_Hos(a, b, s)"),
    "hyp_connection_01": _Identity(_eval_hyp_01, 1e-8,
                                   "ODE propagation 0 -> 1 vs connection "
                                   "matrix"),
    "hyp_connection_0inf": _Identity(_eval_hyp_0inf, 1e-8,
                                     "ODE propagation 0 -> infinity vs "
                                     "connection matrix"),
    "dgamma_shift_1": _Identity(_eval_dgamma_shift(_half), 1e-10,
                                "gamma/2 shift of the double Gamma"),
    "dgamma_shift_2": _Identity(_eval_dgamma_shift(_inv), 1e-10,
                                "2/gamma shift of the double Gamma"),
    "dsine_inversion": _Identity(_eval_dsine_inversion, 1e-11,
                                 "S(x) S(Q-x) = 1"),
    "dsine_shift_1": _Identity(_eval_dsine_shift(_half), 1e-10,
                               "S(x+gamma/2)/S(x) = 2 sin(pi gamma x/2)"),
    "dsine_shift_2": _Identity(_eval_dsine_shift(_inv), 1e-10,
                               "S(x+2/gamma)/S(x) = 2 sin(2 pi x/gamma)"),
    "dgamma_unit": _Identity(_eval_dgamma_unit, 1e-12,
                             "double Gamma at Q/2 equals 1"),
    "dgamma_q_ratio": _Identity(_eval_dgamma_q_ratio, 1e-10,
                                "G2(Q)/G2(2/gamma) = sqrt(2 pi) "
                                "sqrt(gamma/2)"),
    "lngamma_reflection": _Identity(_eval_lngamma_reflection, 1e-12,
                                    "Gamma(A) Gamma(1-A) = pi/sin(pi A)"),
    "lngamma_duplication": _Identity(_eval_lngamma_duplication, 1e-12,
                                     "Legendre duplication formula"),
}

DEFAULT_TOLERANCES = {name: ident.tol for name, ident in IDENTITIES.items()}


def _params_of(P):
    """Liouville parameters for a report; identities that do not involve
    gamma get a placeholder value."""
    g = P.get("gamma", 1.0)
    return LiouvilleParams(complex(g).real)


def evaluate_identity(name, params, tol=None, settings=DEFAULT_SETTINGS):
    """Evaluate one registered identity at the given parameters.

    Singular coefficients and numerical failures are reported through the
    ``error`` field instead of being raised.
    """
    ident = IDENTITIES[name]
    tol = ident.tol if tol is None else float(tol)
    params = {k: complex(v) for k, v in params.items()}
    start = time.perf_counter()
    try:
        trk = _Tracker(_params_of(params), settings)
        lhs, rhs, scale = ident.evaluate(params, trk)
    except LiouvilleError as exc:
        return IdentityReport(name, params, elapsed=time.perf_counter()
                              - start, tol=tol, error=exc.to_dict())
    return _finish(name, params, lhs, rhs, scale, tol,
                   time.perf_counter() - start)


def rerun_report(report, settings=DEFAULT_SETTINGS):
    """Recompute a report from its stored name, parameters and tolerance."""
    return evaluate_identity(report.identity_name, report.params, report.tol,
                             settings)


def hazard_distance(name, params):
    """Distance from the ingredients of an identity to their singular sets,
    computed without evaluating any contour integral."""
    params = {k: complex(v) for k, v in params.items()}
    trk = _Tracker(_params_of(params), dry=True)
    try:
        IDENTITIES[name].evaluate(params, trk)
    except LiouvilleError:
        return 0.0
    return _hazard_distance(trk.records, trk.p)


def _run_many(names, params, tol, settings):
    return [evaluate_identity(n, params, _tol(tol, n), settings)
            for n in names]


def _tol(tol, name):
    if tol is None:
        return None
    if isinstance(tol, dict):
        return tol.get(name)
    return tol


# ---------------------------------------------------------------------------
# Public check functions
# ---------------------------------------------------------------------------

def check_h_shift(chi, a, p, tol=None, s=DEFAULT_SETTINGS):
    """Both shift equations of the three-point function for one ``chi``."""
    params = _three_point_params(p, a, chi=chi)
    return _run_many(["h_shift_1", "h_shift_2"], params, tol, s)


def _refl_params(p, a, **extra):
    out = {"gamma": complex(p.gamma)}
    out.update({k: complex(v) for k, v in extra.items()})
    out.update({"beta": a.beta, "sigma1": a.sigma1, "sigma2": a.sigma2})
    return out


def check_r_shift(chi, a, p, tol=None, s=DEFAULT_SETTINGS):
    """Both chi-shift equations of the reflection coefficient."""
    return _run_many(["r_shift_1", "r_shift_2"], _refl_params(p, a, chi=chi),
                     tol, s)


def check_r_vanishing(a, p, tol=None, s=DEFAULT_SETTINGS):
    """``R(beta, sigma1, sigma1 - beta/2)`` vanishes; ``a.sigma2`` unused."""
    params = {"gamma": complex(p.gamma), "beta": a.beta, "sigma1": a.sigma1}
    return evaluate_identity("r_shift_vanishing", params, _tol(tol, ""), s)


def check_r_combined(a, p, tol=None, s=DEFAULT_SETTINGS):
    return evaluate_identity("r_combined", _refl_params(p, a), tol, s)


def check_r_composition(a, p, tol=None, s=DEFAULT_SETTINGS):
    return evaluate_identity("r_composition", _refl_params(p, a), tol, s)


def check_r_reflection(a, p, tol=None, s=DEFAULT_SETTINGS):
    return evaluate_identity("r_reflection", _refl_params(p, a), tol, s)


def check_h_reflection(a, p, tol=None, s=DEFAULT_SETTINGS):
    """Reflection of ``H`` through ``R`` and of ``J_PT`` in ``beta1``."""
    return _run_many(["h_reflection", "j_reflection"],
                     _three_point_params(p, a), tol, s)


def check_h_residues(a, p, tol=None, s=DEFAULT_SETTINGS):
    """The two residues of ``H`` and the ratio of the ``J_PT`` residues at
    ``beta1 = 2Q - beta2 - beta3`` (and minus gamma); ``a.beta[0]`` is
    ignored."""
    a = a.with_beta1(0.0)
    return _run_many(["h_residue_1", "h_residue_2", "j_residue_ratio"],
                     _three_point_params(p, a), tol, s)


def check_three_term(chi, a, p, tol=None, s=DEFAULT_SETTINGS):
    """Three-term relation at ``beta1 = a.beta[0]``."""
    return evaluate_identity("three_term",
                             _three_point_params(p, a, chi=chi), tol, s)


def check_three_term_periodicity(chi, a, p, tol=None, s=DEFAULT_SETTINGS):
    """``2/chi`` periodicity of ``a_chi`` and ``b_chi``."""
    return _run_many(["three_term_periodicity_a", "three_term_periodicity_b"],
                     _three_point_params(p, a, chi=chi), tol, s)


def check_special_values(p, tol=None, sigmas=None, s=DEFAULT_SETTINGS):
    """``R(Q) = -1`` and the closed form at ``beta = gamma`` for each
    ``(sigma1, sigma2)`` pair in ``sigmas``."""
    if sigmas is None:
        Q = p.Q
        sigmas = [(Q / 2 + 0.05, Q / 2 - 0.03), (Q / 2 + 0.1j, Q / 2 - 0.12),
                  (Q / 2 - 0.08 + 0.05j, Q / 2 + 0.11 - 0.07j)]
    out = []
    for s1, s2 in sigmas:
        params = {"gamma": complex(p.gamma), "sigma1": complex(s1),
                  "sigma2": complex(s2)}
        out += _run_many(["r_special_q", "r_special_gamma"], params, tol, s)
    return out


def check_g_residues(beta, sigma, p, tol=None, s=DEFAULT_SETTINGS):
    """Residue of ``G_Hos`` and of its contour integral at
    ``alpha = Q - beta/2``."""
    params = {"gamma": complex(p.gamma), "beta": complex(beta),
              "sigma": complex(sigma)}
    return _run_many(["g_hos_residue", "j_hos_residue"], params, tol, s)


def check_sine_integral_identities(p, tol=None, samples=None,
                                   s=DEFAULT_SETTINGS):
    """The exponential double-sine integral and the kernel-swap identity.

    ``samples`` is a list of ``(name, params)``; by default one sample of
    each identity at the given ``gamma``.
    """
    if samples is None:
        Q = p.Q
        samples = [
            ("sine_integral_exponential",
             {"alpha_p": Q - 0.45, "beta_p": Q - 1.8}),
            ("sine_integral_kernel_swap",
             {"alpha": Q, "beta": 0.9, "sigma": Q / 2 + 0.05 + 0.03j}),
        ]
    out = []
    for name, params in samples:
        full = {"gamma": complex(p.gamma)}
        full.update({k: complex(v) for k, v in params.items()})
        out.append(evaluate_identity(name, full, _tol(tol, name), s))
    return out


def check_hyp_connection(h, c1=1.0, c2=0.0, tol=None):
    """ODE propagation against both connection matrices."""
    params = {"A": h.A, "B": h.B, "C": h.C, "c1": c1, "c2": c2}
    return _run_many(["hyp_connection_01", "hyp_connection_0inf"], params,
                     tol, DEFAULT_SETTINGS)


_SPECIALFN_X = ["dgamma_shift_1", "dgamma_shift_2", "dsine_inversion",
                "dsine_shift_1", "dsine_shift_2"]
_SPECIALFN_A = ["lngamma_reflection", "lngamma_duplication"]


def check_specialfn_suite(p, tol=None, xs=(), As=(), s=DEFAULT_SETTINGS):
    """Shift, inversion and normalisation identities of the special
    functions at the points ``xs`` (and Gamma identities at ``As``)."""
    g = complex(p.gamma)
    out = _run_many(["dgamma_unit", "dgamma_q_ratio"], {"gamma": g}, tol, s)
    for x in xs:
        out += _run_many(_SPECIALFN_X, {"gamma": g, "x": complex(x)}, tol, s)
    for A in As:
        out += _run_many(_SPECIALFN_A, {"A": complex(A)}, tol, s)
    return out


# ---------------------------------------------------------------------------
# Random parameter generation
# ---------------------------------------------------------------------------

def _draw_betas(rng, p, n=3):
    g, Q = p.gamma, p.Q
    while True:
        beta = rng.uniform(g / 2 + 0.1, Q - 0.1, n)
        if n < 3 or beta.sum() > 2 * Q + 0.1:
            return [complex(v) for v in beta]


def _draw_sigma(rng, p):
    g, Q = p.gamma, p.Q
    return complex(Q / 2 + rng.uniform(-1, 1) * 0.8 / (2 * g)
                   + 1j * rng.uniform(-0.3, 0.3))


def _draw_sigmas(rng, p):
    g, Q = p.gamma, p.Q
    s1, s2 = _draw_sigma(rng, p), _draw_sigma(rng, p)
    # the third boundary parameter lives in the sub-band
    # [Q/2 - 1/(2g), Q/2 + 1/(2g) - g/4]; intersect it with the sampling
    # box, which it misses entirely for gamma above ~1.897
    lo, hi = Q / 2 - 1 / (2 * g), Q / 2 + 1 / (2 * g) - g / 4
    box = 0.8 / (2 * g)
    if max(lo, Q / 2 - box) < min(hi, Q / 2 + box):
        lo, hi = max(lo, Q / 2 - box), min(hi, Q / 2 + box)
    s3 = complex(rng.uniform(lo, hi) + 1j * rng.uniform(-0.3, 0.3))
    return [s1, s2, s3]


def _three_point_draw(rng, p):
    return ThreePointArgs(_draw_betas(rng, p), _draw_sigmas(rng, p))


def _family_shift(rng, p):
    a = _three_point_draw(rng, p)
    out = []
    for chi in (p.gamma / 2, 2 / p.gamma):
        params = _three_point_params(p, a, chi=chi)
        out += [("h_shift_1", params), ("h_shift_2", params)]
    params = _three_point_params(p, a)
    return out + [("h_reflection", params), ("j_reflection", params)]


def _family_reflection(rng, p):
    be = _draw_betas(rng, p, 1)[0]
    s1, s2 = _draw_sigma(rng, p), _draw_sigma(rng, p)
    base = {"gamma": complex(p.gamma), "beta": be, "sigma1": s1,
            "sigma2": s2}
    out = []
    for chi in (p.gamma / 2, 2 / p.gamma):
        params = dict(base, chi=complex(chi))
        out += [("r_shift_1", params), ("r_shift_2", params)]
    out += [(n, base) for n in ("r_combined", "r_composition",
                                "r_reflection")]
    out.append(("r_shift_vanishing", {"gamma": complex(p.gamma), "beta": be,
                                      "sigma1": s1}))
    return out


def _family_special(rng, p):
    params = {"gamma": complex(p.gamma), "sigma1": _draw_sigma(rng, p),
              "sigma2": _draw_sigma(rng, p)}
    return [("r_special_q", params), ("r_special_gamma", params)]


def _family_residues(rng, p):
    b2, b3 = _draw_betas(rng, p, 2)
    a = ThreePointArgs((0.0, b2, b3), _draw_sigmas(rng, p))
    params = _three_point_params(p, a)
    return [(n, params) for n in ("h_residue_1", "h_residue_2",
                                  "j_residue_ratio")]


def _family_three_term(rng, p):
    out = []
    b2, b3 = _draw_betas(rng, p, 2)
    sig = _draw_sigmas(rng, p)
    for chi in (p.gamma / 2, 2 / p.gamma):
        # centre the three evaluation points on the reflection point Q
        b1 = p.Q - 2 * chi + rng.uniform(-0.4, 0.4)
        a = ThreePointArgs((b1, b2, b3), sig)
        params = _three_point_params(p, a, chi=chi)
        out += [("three_term", params), ("three_term_periodicity_a", params),
                ("three_term_periodicity_b", params)]
    return out


def _family_hos(rng, p):
    Q = p.Q
    be = complex(rng.uniform(0.3, Q - 0.3))
    sg = _draw_sigma(rng, p)
    params = {"gamma": complex(p.gamma), "beta": be, "sigma": sg}
    return [("g_hos_residue", params), ("j_hos_residue", params)]


def _family_sine(rng, p):
    Q, b = p.Q, p.b
    ap = complex(rng.uniform(0.3, Q - 0.6), rng.uniform(-0.2, 0.2))
    # keep Re(ap + bp - Q) below min(b, 1/b)/4, inside the continuation
    # domain with room to spare
    top = Q - ap.real + min(b, 1 / b) / 4
    bp = complex(rng.uniform(0.3, max(top, 0.4)), rng.uniform(-0.2, 0.2))
    be = rng.uniform(0.8, Q - 0.2)
    al = rng.uniform(Q - be / 2 + 0.3, Q + be / 2 - 0.3)
    sg = _draw_sigma(rng, p)
    return [("sine_integral_exponential",
             {"gamma": complex(p.gamma), "alpha_p": ap, "beta_p": bp}),
            ("sine_integral_kernel_swap",
             {"gamma": complex(p.gamma), "alpha": complex(al),
              "beta": complex(be), "sigma": sg})]


def _family_hyp(rng, p):
    while True:
        A, B = rng.uniform(-1.5, 1.5, 2)
        C = rng.uniform(0.2, 1.8)
        gaps = [C, C - A - B, A - B]
        if min(abs(x - round(x)) for x in gaps) >= HAZARD_DISTANCE:
            break
    c1, c2 = rng.uniform(-1, 1, 2)
    params = {"A": complex(A), "B": complex(B), "C": complex(C),
              "c1": complex(c1), "c2": complex(c2)}
    return [("hyp_connection_01", params), ("hyp_connection_0inf", params)]


def _family_specialfn(rng, p):
    Q = p.Q
    x = complex(rng.uniform(-1.5, Q + 1.5), rng.uniform(-1.5, 1.5))
    A = complex(rng.uniform(-2.5, 2.5), rng.uniform(-1, 1))
    return [(n, {"gamma": complex(p.gamma), "x": x}) for n in _SPECIALFN_X] \
        + [(n, {"A": A}) for n in _SPECIALFN_A]


FAMILIES = {
    "shift": _family_shift,
    "reflection": _family_reflection,
    "special": _family_special,
    "residues": _family_residues,
    "three_term": _family_three_term,
    "hos": _family_hos,
    "sine": _family_sine,
    "hyp": _family_hyp,
    "specialfn": _family_specialfn,
}


def draw_family(family, rng, p, max_tries=2000):
    """Draw one admissible parameter set for a family of checks.

    Draws are repeated until every ingredient of every identity in the
    family keeps ``HAZARD_DISTANCE`` from its singular set.  Returns a list
    of ``(identity_name, params)``.
    """
    for _ in range(max_tries):
        items = FAMILIES[family](rng, p)
        if all(hazard_distance(n, prm) >= HAZARD_DISTANCE
               for n, prm in items):
            return items
    raise DomainError(f"no admissible draw for family {family!r}",
                      {"family": family, "gamma": p.gamma})


def _suite_tasks(gammas, n_cases, seed):
    rng = np.random.default_rng(seed)
    tasks = []
    for g in gammas:
        g = float(g)
        if abs(g - np.sqrt(2)) < SQRT2_BAND:
            continue
        p = LiouvilleParams(g)
        tasks += [("dgamma_unit", {"gamma": complex(g)}),
                  ("dgamma_q_ratio", {"gamma": complex(g)})]
        for _ in range(int(n_cases)):
            for family in FAMILIES:
                if family == "special" and abs(
                        4 / g ** 2 - round(4 / g ** 2)) < HAZARD_DISTANCE:
                    continue
                try:
                    tasks += draw_family(family, rng, p)
                except DomainError as exc:
                    tasks.append((DRAW_FAILURE, {"gamma": complex(g)},
                                  exc.to_dict()))
    return tasks


DRAW_FAILURE = "parameter_draw"


def _evaluate_task(args):
    name, params, tol, settings = args
    if name == DRAW_FAILURE:
        # a family without an admissible draw is reported, not raised;
        # the error dictionary travels in the tolerance slot
        return IdentityReport(DRAW_FAILURE, params, error=tol)
    return evaluate_identity(name, params, tol, settings)


def run_suite(gammas, n_cases, seed, tol_map=None, *, jobs=1,
              settings=DEFAULT_SETTINGS):
    """Run every identity on seeded random parameters.

    Parameters are drawn with ``numpy.random.default_rng(seed)`` (PCG64) in
    a fixed order, so equal seeds give bit-identical draws.  Values of
    gamma within 1e-3 of sqrt(2) are skipped.  Reports are sorted by
    identity name, then by a hash of their parameters.  A family with no
    admissible draw at some gamma (small gamma packs the pole lattices too
    densely) yields a failing ``parameter_draw`` report carrying the error.

    Parameters
    ----------
    gammas : sequence of float
    n_cases : int
        Parameter draws per family and gamma.
    seed : int
    tol_map : dict, optional
        Tolerance overrides by identity name; a float applies to all.
    jobs : int
        Worker processes; 1 evaluates in the calling process.
    """
    tasks = [(t[0], t[1], t[2] if t[0] == DRAW_FAILURE
              else _tol(tol_map, t[0]), settings)
             for t in _suite_tasks(gammas, n_cases, seed)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_evaluate_task, tasks, chunksize=1))
    else:
        reports = [_evaluate_task(t) for t in tasks]
    return sorted(reports, key=lambda r: (r.identity_name, r.params_hash()))
