r"""Gamma, Barnes double Gamma, double Sine and Gauss hypergeometric functions.

Conventions
-----------
Throughout, ``b = gamma/2`` and ``Q = b + 1/b``.  The double Gamma function
is normalised by ``Gamma_b(Q/2) = 1`` and satisfies

.. math::

    \frac{\Gamma_b(x)}{\Gamma_b(x+b)} = \frac{\Gamma(bx)\, b^{1/2-bx}}{\sqrt{2\pi}},
    \qquad
    \frac{\Gamma_b(x)}{\Gamma_b(x+1/b)} = \frac{\Gamma(x/b)\, b^{x/b-1/2}}{\sqrt{2\pi}}.

It has simple poles at ``-n b - m/b`` (n, m >= 0) and no zeros.  The double
Sine function is ``S(x) = Gamma_b(x) / Gamma_b(Q - x)``; it satisfies
``S(x + b) = 2 sin(pi b x) S(x)`` and ``S(x) S(Q - x) = 1``, has poles at
``-n b - m/b`` and zeros at ``Q + n b + m/b``.

Only exponentiated values are meaningful: the logarithms returned here may
differ from one another by multiples of ``2 pi i`` between code paths.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import special

from .errors import DegenerateConnection, DomainError, PoleEncountered
from .numerics import DEFAULT_SETTINGS, integrate_real

__all__ = [
    "LiouvilleParams", "HypParams", "LatticeKind", "lngamma",
    "log_double_gamma", "double_gamma", "log_double_sine", "double_sine",
    "log_double_sine_array", "lattice_query", "hyp2f1",
    "connection_matrix_01", "connection_matrix_0inf", "POLE_GUARD",
]

POLE_GUARD = 1e-9
LOG_2PI = np.log(2 * np.pi)
_T_SMALL = 1e-3


@dataclass(frozen=True)
class LiouvilleParams:
    """Coupling constant ``gamma`` in (0, 2) and derived quantities."""
    gamma: float

    def __post_init__(self):
        g = float(self.gamma)
        if not 0 < g < 2:
            raise DomainError(f"gamma must lie in (0, 2), got {g!r}",
                              {"gamma": g})
        object.__setattr__(self, "gamma", g)

    @property
    def b(self):
        return self.gamma / 2

    @property
    def q_charge(self):
        return self.gamma / 2 + 2 / self.gamma

    Q = q_charge


@dataclass(frozen=True)
class HypParams:
    """Parameters ``(A, B, C)`` of the Gauss hypergeometric function."""
    A: complex
    B: complex
    C: complex


class LatticeKind(Enum):
    GAMMA_POLE = "GammaPole"
    SINE_POLE = "SinePole"
    SINE_ZERO = "SineZero"


# ---------------------------------------------------------------------------
# Euler Gamma
# ---------------------------------------------------------------------------

def _near_nonpositive_integer(z, tol=0.0):
    z = np.asarray(z, dtype=complex)
    k = np.round(z.real)
    return (k <= 0) & (np.abs(z - k) <= tol)


def lngamma(z):
    """Principal-branch ``log Gamma(z)`` for complex ``z`` (scalar or array).

    The branch is continuous on the plane cut along the negative real axis.

    Raises
    ------
    PoleEncountered
        If ``z`` is a non-positive integer.
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(_near_nonpositive_integer(zz)):
        bad = complex(zz[_near_nonpositive_integer(zz)].ravel()[0])
        raise PoleEncountered(f"Gamma has a pole at {bad!r}",
                              {"z_re": bad.real, "z_im": bad.imag,
                               "order": 1})
    out = special.loggamma(zz)
    return complex(out) if np.ndim(out) == 0 else out


def _rgamma_log(z):
    """``log(1/Gamma(z))`` with ``-inf`` at the zeros of 1/Gamma."""
    zz = np.asarray(z, dtype=complex)
    out = np.full(zz.shape, -np.inf + 0j)
    ok = ~_near_nonpositive_integer(zz)
    out[ok] = -special.loggamma(zz[ok])
    return out


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

def lattice_query(kind, x, p, delta):
    """Nearest point of a double-Gamma/double-Sine lattice within ``delta``.

    Parameters
    ----------
    kind : LatticeKind
    x : complex
    p : LiouvilleParams
    delta : float
        Search radius, positive.

    Returns
    -------
    tuple (n, m, distance) or None
        Lattice point ``-n b - m/b`` (poles) or ``Q + n b + m/b`` (zeros).
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    x = complex(x)
    if not np.isfinite(x.real) or not np.isfinite(x.imag):
        return None
    b, Q = p.b, p.q_charge
    if kind is LatticeKind.SINE_ZERO:
        y = x - Q
    else:
        y = -x
    # y must be close to n b + m / b with n, m >= 0
    if abs(y.imag) > delta or y.real < -delta:
        return None
    reach = abs(x) + Q + delta
    n = np.arange(int(reach / b) + 1)
    m = np.arange(int(reach * b) + 1)
    pts = n[:, None] * b + m[None, :] / b
    dist = np.abs(y - pts)
    i, j = np.unravel_index(np.argmin(dist), dist.shape)
    if dist[i, j] <= delta:
        return int(n[i]), int(m[j]), float(dist[i, j])
    return None


def _guard(kind, x, p, what):
    hit = lattice_query(kind, x, p, POLE_GUARD)
    if hit is not None:
        n, m, d = hit
        raise PoleEncountered(
            f"{what} evaluated at {complex(x)!r}, within {d:.2e} of the "
            f"{kind.value} lattice point (n={n}, m={m})",
            {"x_re": complex(x).real, "x_im": complex(x).imag,
             "n": n, "m": m, "lattice": kind.value, "function": what})


# ---------------------------------------------------------------------------
# Double Gamma
# ---------------------------------------------------------------------------

def _dgamma_window(p):
    Q, g = p.q_charge, p.gamma
    return Q / 2 - g / 4, Q / 2 + max(g / 4, 1 / g)


def _dgamma_taylor(d, b, t0):
    """Integral over [0, t0] of the bracket/t expanded to third order."""
    b2 = b * b
    b4 = b2 * b2
    d2 = d * d
    c0 = -d * (b4 - 4 * b2 * d2 - 12 * b2 * d + 1) / (24 * b2)
    c1 = -d2 * (b4 - 2 * b2 * d2 + 12 * b2 + 1) / (48 * b2)
    c2 = d * (7 * b4 * b4 - 40 * b4 * b2 * d2 + 48 * b4 * d2 * d2
              + 480 * b4 * d + 10 * b4 - 40 * b2 * d2 + 7) / (5760 * b4)
    c3 = d2 * (7 * b4 * b4 - 20 * b4 * b2 * d2 + 16 * b4 * d2 * d2
               - 230 * b4 - 20 * b2 * d2 + 7) / (11520 * b4)
    return t0 * (c0 + t0 * (c1 / 2 + t0 * (c2 / 3 + t0 * c3 / 4)))


def _dgamma_integral(x, p, settings):
    """Defining integral of log Gamma_b, valid for Re x > 0."""
    b, Q = p.b, p.q_charge
    d = Q / 2 - x
    rate = min(x.real, Q / 2)
    T = max(1.0, (np.log(1 / max(settings.abs_tol, 1e-300)) + 5) / rate, 40.0)

    def bracket(t):
        num = np.exp(-Q * t / 2) * np.expm1(d * t)
        den = np.expm1(-b * t) * np.expm1(-t / b)
        return (num / den - 0.5 * d * d * np.exp(-t) - d / t) / t

    # oscillation scale sets the initial panel width
    h = min(1.0, 2.0 / max(1.0, abs(x.imag)))
    edges = np.arange(_T_SMALL + h, T, h)
    body, _ = integrate_real(bracket, _T_SMALL, T, settings,
                             breakpoints=edges)
    tail = -0.5 * d * d * special.exp1(T) - d / T
    return _dgamma_taylor(d, b, _T_SMALL) + body + tail


def _log_gamma_shift(x, p):
    """log Gamma_b(x) - log Gamma_b(x + b)."""
    b = p.b
    return lngamma(b * x) + (0.5 - b * x) * np.log(b) - 0.5 * LOG_2PI


def log_double_gamma(x, p, settings=DEFAULT_SETTINGS):
    """Logarithm of the Barnes double Gamma function ``Gamma_{gamma/2}(x)``.

    Inside the window ``Q/2 - gamma/4 <= Re x <= Q/2 + max(gamma/4, 1/gamma)``
    the defining integral is evaluated directly; other arguments are moved
    into the window with the ``b``-shift equation.

    Parameters
    ----------
    x : complex
    p : LiouvilleParams
    settings : QuadSettings, optional

    Returns
    -------
    complex
        A logarithm of ``Gamma_{gamma/2}(x)``; only its exponential is
        branch independent.
    """
    x = complex(x)
    if not (np.isfinite(x.real) and np.isfinite(x.imag)):
        raise DomainError(f"non-finite argument {x!r}")
    _guard(LatticeKind.GAMMA_POLE, x, p, "double Gamma")
    b = p.b
    lo, hi = _dgamma_window(p)
    if x.real < lo:
        k = int(np.ceil((lo - x.real) / b))
        steps = x + b * np.arange(k)
        return _dgamma_integral(x + k * b, p, settings) \
            + complex(np.sum(_log_gamma_shift(steps, p)))
    if x.real > hi:
        k = int(np.ceil((x.real - hi) / b))
        steps = x - b * np.arange(1, k + 1)
        return _dgamma_integral(x - k * b, p, settings) \
            - complex(np.sum(_log_gamma_shift(steps, p)))
    return _dgamma_integral(x, p, settings)


def double_gamma(x, p, settings=DEFAULT_SETTINGS):
    """``Gamma_{gamma/2}(x)``."""
    return complex(np.exp(log_double_gamma(x, p, settings)))


# ---------------------------------------------------------------------------
# Double Sine
# ---------------------------------------------------------------------------
#
# For |Re(Q - 2x)| < Q the double Sine has the representation
#
#   log S(x) = int_0^inf dt/t [ sinh(u t) / (2 sinh(b t) sinh(t/b)) - u/(2t) ],
#   u = Q - 2x,
#
# which follows from the double Gamma integral by subtracting the copies at
# x and Q - x.  Arguments are moved into |Re u| <= b with the b-shift.

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


@lru_cache(maxsize=64)
def _sine_rule(b, n_panels):
    """Composite Gauss-Legendre rule on [t_small, 40 b].

    Returns the nodes, the sinh-term kernel, the subtracted ``1/(2t)`` term
    (both already divided by t and multiplied by the weights) and T.
    """
    T = 40 * b
    edges = np.linspace(_T_SMALL, T, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    kern = w / (2 * t * np.sinh(b * t) * np.sinh(t / b))
    inv = w / (2 * t * t)
    return t, kern, inv, T


def _sine_panels(b, im_u):
    """Panel count (a power of two) resolving the oscillation e^{i Im(u) t}."""
    width = np.minimum(np.pi * b, 5.0 / np.maximum(np.abs(im_u), 1e-12))
    n = np.ceil((40 * b - _T_SMALL) / width)
    return np.exp2(np.ceil(np.log2(np.maximum(n, 1)))).astype(int)


def _sine_window(x, b):
    """log S on the window |Re(Q - 2x)| <= b, vectorised over x."""
    Q = b + 1 / b
    u = Q - 2 * x
    out = np.empty(u.shape, dtype=complex)
    panels = _sine_panels(b, u.imag)
    for n_panels in np.unique(panels):
        idx = np.flatnonzero(panels == n_panels)
        t, kern, inv, T = _sine_rule(b, int(n_panels))
        chunk = max(1, 1_000_000 // t.size)
        for s in range(0, idx.size, chunk):
            sel = idx[s:s + chunk]
            uu = u[sel]
            # subtract the 1/t^2 singular part node by node, which keeps
            # the summands O(1) near t_small
            vals = np.sinh(np.outer(uu, t)) * kern - np.outer(uu, inv)
            out[sel] = vals.sum(axis=1)
    # 0 < t < t_small: bracket/t = s0 + s2 t^2 + O(t^4)
    b2 = b * b
    b4 = b2 * b2
    u2 = u * u
    s0 = u * (-b4 + b2 * u2 - 1) / (12 * b2)
    s2 = u * (7 * b4 * b4 - 10 * b4 * b2 * u2 + 3 * b4 * u2 * u2 + 10 * b4
              - 10 * b2 * u2 + 7) / (720 * b4)
    t0 = _T_SMALL
    small = t0 * (s0 + s2 * t0 * t0 / 3)
    # tail of -u/(2 t^2) beyond T = 40 b; the sinh part is below e^{-40}
    return out + small - u / (80 * b)


def log_double_sine_array(x, p):
    """Vectorised ``log S_{gamma/2}(x)`` without the pole guard.

    Intended for contour integrands, where the path clearance is enforced
    by the planner.  Zeros give a real part of ``-inf``, poles ``+inf``.
    """
    b, Q = p.b, p.q_charge
    xx = np.asarray(x, dtype=complex)
    flat = xx.ravel()
    k = np.rint((flat.real - Q / 2) / b).astype(int)
    xw = flat - k * b
    res = _sine_window(xw, b)
    kmax = int(np.max(np.abs(k))) if k.size else 0
    with np.errstate(divide="ignore"):
        for j in range(1, kmax + 1):
            up = k >= j
            if np.any(up):
                res[up] += np.log(2 * np.sin(np.pi * b * (flat[up] - j * b)))
            down = -k >= j
            if np.any(down):
                res[down] -= np.log(
                    2 * np.sin(np.pi * b * (flat[down] + (j - 1) * b)))
    return res.reshape(xx.shape)


def log_double_sine(x, p):
    """Logarithm of the double Sine function ``S_{gamma/2}(x)``.

    Returns ``-inf`` (real part) exactly on the zero lattice
    ``Q + n gamma/2 + 2m/gamma``.

    Raises
    ------
    PoleEncountered
        Within ``POLE_GUARD`` of a pole ``-n gamma/2 - 2m/gamma``.
    """
    x = complex(x)
    if not (np.isfinite(x.real) and np.isfinite(x.imag)):
        raise DomainError(f"non-finite argument {x!r}")
    _guard(LatticeKind.SINE_POLE, x, p, "double Sine")
    if lattice_query(LatticeKind.SINE_ZERO, x, p, POLE_GUARD) is not None:
        return complex(-np.inf, 0.0)
    return complex(log_double_sine_array(np.array([x]), p)[0])


def double_sine(x, p):
    """``S_{gamma/2}(x)``; exactly zero on the zero lattice."""
    val = log_double_sine(x, p)
    if np.isneginf(val.real):
        return 0j
    return complex(np.exp(val))


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def _near_integer(z, tol=1e-8):
    z = complex(z)
    return abs(z - round(z.real)) <= tol


def _require_gaps(h, names):
    gaps = {"C": h.C, "C-A-B": h.C - h.A - h.B, "A-B": h.A - h.B}
    bad = [n for n in names if _near_integer(gaps[n])]
    if bad:
        raise DegenerateConnection(
            "connection formula needs non-integer " + ", ".join(bad),
            {n: str(complex(gaps[n])) for n in bad})


def _series(A, B, C, t, max_terms=20000):
    if _near_nonpositive_integer(C, 0.0) and not (
            _near_nonpositive_integer(A, 0.0) or
            _near_nonpositive_integer(B, 0.0)):
        raise PoleEncountered(f"hypergeometric series with C = {C!r}",
                              {"C": str(complex(C))})
    total = 1 + 0j
    term = 1 + 0j
    small = 0
    for n in range(max_terms):
        term *= (A + n) * (B + n) / ((C + n) * (n + 1)) * t
        total += term
        if term == 0:
            return total
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise ArithmeticError("hypergeometric series did not converge")


def _pow(base, expo):
    return np.exp(expo * np.log(base + 0j))


def _hyp_unit(A, B, C, t):
    """F(A, B; C; t) for 0 <= t < 1."""
    if t <= 0.5:
        return _series(A, B, C, t)
    h = HypParams(A, B, C)
    _require_gaps(h, ["C-A-B"])
    B1, B2 = _connection_01_column0(h)
    s = 1 - t
    return (B1 * _series(A, B, 1 + A + B - C, s)
            + B2 * _pow(s, C - A - B) * _series(C - A, C - B, 1 + C - A - B, s))


def hyp2f1(h, t):
    """Gauss hypergeometric function ``F(A, B; C; t)`` for real ``t < 1``.

    Parameters
    ----------
    h : HypParams
    t : float

    Notes
    -----
    ``|t| <= 1/2`` uses the power series; ``1/2 < t < 1`` the connection to
    the basis at ``t = 1``; ``-2 <= t < -1/2`` the Pfaff transformation
    ``t -> t/(t-1)``; ``t < -2`` the connection to the basis at infinity.
    """
    t = float(t)
    if not t < 1:
        raise DomainError("hyp2f1 requires t < 1", {"t": t})
    A, B, C = complex(h.A), complex(h.B), complex(h.C)
    if t == 0:
        return 1 + 0j
    if -0.5 <= t <= 0.5:
        return _series(A, B, C, t)
    if t > 0:
        return _hyp_unit(A, B, C, t)
    if t >= -2:
        z = t / (t - 1)
        return _pow(1 - t, -A) * _hyp_unit(A, C - B, C, z)
    D = np.linalg.solve(connection_matrix_0inf(h), np.array([1, 0], complex))
    w = 1 / t
    at = -t
    return (D[0] * _pow(at, -A) * _series(A, 1 + A - C, 1 + A - B, w)
            + D[1] * _pow(at, -B) * _series(B, 1 + B - C, 1 + B - A, w))


def _gamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den), zero when a denominator is a pole."""
    val = np.sum(lngamma(np.asarray(num, complex))) \
        + np.sum(_rgamma_log(np.asarray(den, complex)))
    return complex(np.exp(val))


def _connection_01_column0(h):
    A, B, C = h.A, h.B, h.C
    return (_gamma_ratio([C, C - A - B], [C - A, C - B]),
            _gamma_ratio([C, A + B - C], [A, B]))


def connection_matrix_01(h):
    """Matrix sending ``(C1, C2)`` to ``(B1, B2)`` on (0, 1).

    A solution ``C1 F(A,B;C;t) + C2 t^{1-C} F(1+A-C, 1+B-C; 2-C; t)`` equals
    ``B1 F(A,B;1+A+B-C;1-t) + B2 (1-t)^{C-A-B} F(C-A,C-B;1+C-A-B;1-t)``.
    """
    _require_gaps(h, ["C", "C-A-B"])
    A, B, C = complex(h.A), complex(h.B), complex(h.C)
    return np.array([
        [_gamma_ratio([C, C - A - B], [C - A, C - B]),
         _gamma_ratio([2 - C, C - A - B], [1 - A, 1 - B])],
        [_gamma_ratio([C, A + B - C], [A, B]),
         _gamma_ratio([2 - C, A + B - C], [A - C + 1, B - C + 1])],
    ])


def connection_matrix_0inf(h):
    """Matrix sending ``(D1, D2)`` to ``(C1, C2)`` on (-inf, 0).

    With all powers taken of ``|t|``, a solution
    ``D1 |t|^{-A} F(A,1+A-C;1+A-B;1/t) + D2 |t|^{-B} F(B,1+B-C;1+B-A;1/t)``
    equals ``C1 F(A,B;C;t) + C2 |t|^{1-C} F(1+A-C,1+B-C;2-C;t)``.
    """
    _require_gaps(h, ["C", "A-B"])
    A, B, C = complex(h.A), complex(h.B), complex(h.C)
    return np.array([
        [_gamma_ratio([1 - C, A - B + 1], [A - C + 1, 1 - B]),
         _gamma_ratio([1 - C, B - A + 1], [B - C + 1, 1 - A])],
        [_gamma_ratio([C - 1, A - B + 1], [A, C - B]),
         _gamma_ratio([C - 1, B - A + 1], [B, C - A])],
    ])
