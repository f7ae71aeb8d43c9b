"""Adaptive quadrature and limit extrapolation.

The integrator is a Gauss-Kronrod 7/15 rule with interval bisection.  All
intervals that still need work at a given refinement level are evaluated in
a single call to the integrand, so ``f`` should accept a 1-d array of
abscissae and return an array of the same shape.  Scalar-only callables can
be passed with ``vectorized=False``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DivergentSequence, NonFiniteIntegrand, SubdivisionLimit

__all__ = ["QuadSettings", "DEFAULT_SETTINGS", "integrate_real",
           "extrapolate_limit", "as_finite_complex"]


@dataclass(frozen=True)
class QuadSettings:
    """Tolerances for the adaptive integrators.

    The requested accuracy is ``max(rel_tol * |I|, abs_tol)``.
    """
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be non-negative")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def scaled(self, factor):
        """Settings with both tolerances multiplied by ``factor``."""
        return QuadSettings(self.rel_tol * factor, self.abs_tol * factor,
                            self.max_subdivisions)


DEFAULT_SETTINGS = QuadSettings()

# Kronrod abscissae on [-1, 1] (non-negative half) and weights; the Gauss
# 7-point rule uses every other abscissa.
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[9:14:2] = _WG[2::-1]
_GW[7] = _WG[3]


def as_finite_complex(value, what="value"):
    """Return ``value`` as a Python complex, rejecting NaN and infinities."""
    from .errors import NonFiniteValue
    z = complex(value)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise NonFiniteValue(f"non-finite {what}: {z!r}")
    return z


def _gk15(f, lo, hi):
    """Apply the 7/15 pair to every interval [lo[i], hi[i]] at once."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t = centre[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(t.ravel()), dtype=complex).reshape(t.shape)
    if not np.all(np.isfinite(vals)):
        bad = t[~np.isfinite(vals)][0]
        raise NonFiniteIntegrand(f"integrand is not finite at t={bad!r}",
                                 {"t": float(bad)})
    kron = half * (vals @ _KW)
    gauss = half * (vals @ _GW)
    # QUADPACK-style error scaling
    mean = kron / (2 * half)
    resasc = half * (np.abs(vals - mean[:, None]) @ _KW)
    diff = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(resasc > 0,
                         np.minimum(1.0, (200 * diff / resasc) ** 1.5), 1.0)
    err = np.where(resasc > 0, resasc * scale, diff)
    err = np.maximum(err, 50 * np.finfo(float).eps * np.abs(kron))
    return kron, err


def integrate_real(f, a, b, settings=DEFAULT_SETTINGS, *, breakpoints=None,
                   vectorized=True):
    """Integrate a complex-valued function of a real variable over [a, b].

    Parameters
    ----------
    f : callable
        Integrand.  Receives a 1-d float array unless ``vectorized`` is
        False, in which case it is called once per abscissa.
    a, b : float
        Finite limits with ``a < b``.
    settings : QuadSettings
        Tolerances and subdivision budget.
    breakpoints : sequence of float, optional
        Interior points used to split the initial interval.

    Returns
    -------
    value : complex
    error : float
        Estimated absolute error, at most ``max(rel_tol*|value|, abs_tol)``
        on successful return.
    """
    a, b = float(a), float(b)
    if not a < b:
        raise ValueError("integrate_real requires a < b")
    if not vectorized:
        g = f

        def f(t):
            return np.array([g(x) for x in t], dtype=complex)

    edges = [a]
    if breakpoints is not None:
        edges += sorted({float(x) for x in breakpoints if a < x < b})
    edges.append(b)
    lo = np.array(edges[:-1])
    hi = np.array(edges[1:])
    length = b - a

    done_val = 0j
    done_err = 0.0
    n_sub = len(lo)
    while True:
        vals, errs = _gk15(f, lo, hi)
        total = done_val + vals.sum()
        total_err = done_err + errs.sum()
        target = max(settings.rel_tol * abs(total), settings.abs_tol)
        if total_err <= target:
            return total, float(total_err)
        local = target * (hi - lo) / length
        keep = errs <= local
        done_val += vals[keep].sum()
        done_err += errs[keep].sum()
        lo, hi = lo[~keep], hi[~keep]
        n_sub += len(lo)
        if n_sub > settings.max_subdivisions or len(lo) == 0:
            raise SubdivisionLimit(
                "tolerance not reached within the subdivision budget",
                {"value_re": total.real, "value_im": total.imag,
                 "error": float(total_err), "target": float(target)})
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])


def extrapolate_limit(g, eps_seq):
    """Richardson extrapolation of ``g(eps)`` to ``eps = 0``.

    Assumes ``g(eps) = c0 + c1*eps + c2*eps**2 + ...`` and evaluates the
    interpolating polynomial through all samples at zero (Neville's scheme).

    Parameters
    ----------
    g : callable
        Complex-valued function of a small positive real.
    eps_seq : sequence of float
        At least three positive values, decreasing geometrically.

    Returns
    -------
    value : complex
        The extrapolated ``c0``.
    error : float
        Difference between the two highest-order extrapolants.
    """
    eps = np.asarray(eps_seq, dtype=float)
    if eps.size < 3:
        raise ValueError("need at least three epsilon values")
    ratios = eps[1:] / eps[:-1]
    if np.any(eps <= 0) or np.any(ratios <= 0) or np.any(ratios >= 1):
        raise ValueError("eps_seq must be positive and strictly decreasing")
    vals = np.array([complex(g(e)) for e in eps])
    table = vals.copy()
    diag = [vals[0]]
    n = len(eps)
    for k in range(1, n):
        # table[i] holds the degree-k extrapolant built from eps[i-k..i]
        for i in range(n - 1, k - 1, -1):
            table[i] = (eps[i - k] * table[i] - eps[i] * table[i - 1]) \
                / (eps[i - k] - eps[i])
        diag.append(table[k])
    diag = np.array(diag)
    steps = np.abs(np.diff(diag))
    value = diag[-1]
    floor = 1e-13 * max(abs(value), 1e-300)
    if len(steps) >= 2 and steps[-1] > floor and steps[-1] >= steps[-2]:
        raise DivergentSequence(
            "successive extrapolants do not contract",
            {"steps": [float(s) for s in steps]})
    return complex(value), float(steps[-1])
