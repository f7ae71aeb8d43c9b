r"""Planning and evaluation of Mellin-Barnes type contour integrals.

The integrals have the form ``int_C f(r) dr/i`` where the integrand has
half-lattices of poles ``xi - n b - m/b`` that must stay to the left of
``C`` and half-lattices ``xi + n b + m/b`` that must stay to its right
(``b = gamma/2``, ``n, m >= 0``).

Instead of bending the path, ``C`` is replaced by a straight upward line
``Re r = base_re``.  Along it ``dr/i = dy``, so the line contributes the
ordinary integral of ``f(base_re + iy)`` over ``y``.  Sliding an upward line
to the right across a simple pole ``p`` adds ``2 pi i Res_p f`` to
``int f dr``, hence ``2 pi Res_p f`` to ``int f dr/i``.  Therefore

* a left-lattice pole with ``Re p > base_re`` contributes ``+2 pi Res_p f``;
* a right-lattice pole with ``Re p < base_re`` contributes ``-2 pi Res_p f``.

Only finitely many poles can be on the wrong side of any line, so the
correction list is finite.  The line is truncated at ``|y| = T`` with ``T``
set from the integrand's exponential decay.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (NonConvergent, NumericalError, PoleCollision,
                     PoleTooClose)
from .numerics import DEFAULT_SETTINGS, integrate_real
from .specialfn import LatticeKind, lattice_query

__all__ = ["Direction", "PoleLattice", "Correction", "ContourSpec",
           "ContourResult", "plan_contour", "integrate_contour",
           "residue_at", "empirical_decay", "pt_integrand_shifts",
           "pt_pole_seeds", "hos_pole_seeds", "COLLISION_TOL",
           "PATH_CLEARANCE"]

COLLISION_TOL = 1e-8
PATH_CLEARANCE = 1e-6
PREFERRED_CLEARANCE = 0.05


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class PoleLattice:
    """Half-lattice ``seed -/+ (n b + m/b)`` extending left or right."""
    seed: complex
    direction: Direction
    label: str = ""

    def points(self, p, re_lo, re_hi):
        """Lattice points with real part in ``[re_lo, re_hi]``."""
        b = p.b
        s = complex(self.seed)
        sgn = -1.0 if self.direction is Direction.LEFT else 1.0
        # offsets lam = n b + m/b >= 0 with s.real + sgn*lam in range
        if sgn < 0:
            lam_lo, lam_hi = s.real - re_hi, s.real - re_lo
        else:
            lam_lo, lam_hi = re_lo - s.real, re_hi - s.real
        lam_lo = max(lam_lo, 0.0)
        if lam_hi < lam_lo:
            return np.empty(0, dtype=complex)
        n = np.arange(int(lam_hi / b) + 1)
        m = np.arange(int(lam_hi * b) + 1)
        lam = (n[:, None] * b + m[None, :] / b).ravel()
        lam = np.unique(lam[(lam >= lam_lo - 1e-14) & (lam <= lam_hi + 1e-14)])
        return s + sgn * lam


@dataclass(frozen=True)
class Correction:
    pole: complex
    sign: int
    radius: float


@dataclass(frozen=True)
class ContourSpec:
    """A straight upward contour with residue corrections.

    Attributes
    ----------
    base_re : float
        Real part of the integration line.
    corrections : tuple of Correction
        Poles on the wrong side of the line, with sign +1 (left lattice) or
        -1 (right lattice) and a circle radius for residue extraction.
    trunc_height : float or None
        Truncation ``T`` of the line; ``None`` lets the integrator choose it
        from the observed decay.
    decay_rate : float
        Rate ``kappa`` in the bound ``|f| <= M exp(-kappa |Im r|)``.
    clearance : float
        Horizontal distance from the line to the nearest pole.
    """
    base_re: float
    corrections: tuple = ()
    trunc_height: float = None
    decay_rate: float = 1.0
    clearance: float = np.inf
    pole_heights: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class ContourResult:
    value: complex
    error: float
    tail_bound: float
    trunc_height: float
    spec: ContourSpec


def _check_collisions(left, right, p):
    for lat_l in left:
        for lat_r in right:
            # left points xi_l - lam and right points xi_r + lam' meet iff
            # xi_r - xi_l = -(n b + m/b)
            hit = lattice_query(LatticeKind.GAMMA_POLE,
                                complex(lat_r.seed) - complex(lat_l.seed),
                                p, COLLISION_TOL)
            if hit is not None:
                n, m, d = hit
                raise PoleCollision(
                    f"left lattice {lat_l.label or lat_l.seed!r} and right "
                    f"lattice {lat_r.label or lat_r.seed!r} overlap "
                    f"(n={n}, m={m}, distance {d:.1e})",
                    {"n": n, "m": m, "distance": d,
                     "left_seed": str(complex(lat_l.seed)),
                     "right_seed": str(complex(lat_r.seed)),
                     "left_label": lat_l.label, "right_label": lat_r.label})


def _dedupe(points, tol=1e-8):
    out = []
    for z in points:
        if all(abs(z - w) > tol for w in out):
            out.append(z)
    return out


def plan_contour(left, right, p, decay_rate, tol=1e-11, *, base_re=None,
                 min_clearance=PREFERRED_CLEARANCE):
    """Choose an integration line and the residue corrections it needs.

    Parameters
    ----------
    left, right : sequence of PoleLattice
        Lattices that must lie left, respectively right, of the contour.
    p : LiouvilleParams
    decay_rate : float
        Exponential decay rate of the integrand along vertical lines.
    tol : float
        Relative accuracy the truncation should respect (informational).
    base_re : float, optional
        Force the line position; corrections are derived for it.
    min_clearance : float
        If the pole-free gap is narrower than twice this value, a line
        with more room and a few residue corrections is preferred.

    Returns
    -------
    ContourSpec
    """
    left = [lat for lat in left]
    right = [lat for lat in right]
    _check_collisions(left, right, p)
    seeds = [complex(lat.seed) for lat in left + right]
    lo = min(z.real for z in seeds) - 1.5
    hi = max(z.real for z in seeds) + 1.5
    if base_re is not None:
        lo, hi = min(lo, base_re - 1.5), max(hi, base_re + 1.5)
    # enumerate one unit beyond the candidate range so that clearances
    # near its ends see every pole
    lpts = np.concatenate([lat.points(p, lo - 1, hi + 1) for lat in left]) \
        if left else np.empty(0, complex)
    rpts = np.concatenate([lat.points(p, lo - 1, hi + 1) for lat in right]) \
        if right else np.empty(0, complex)
    allre = np.concatenate([lpts.real, rpts.real])

    def assess(c):
        n_corr = int(np.sum(lpts.real > c) + np.sum(rpts.real < c))
        clear = float(np.min(np.abs(allre - c))) if allre.size else np.inf
        return n_corr, clear

    if base_re is None:
        xs = np.unique(np.round(allre, 12))
        cands = [c for c in 0.5 * (xs[1:] + xs[:-1]) if lo <= c <= hi]
        cands += [z.real + d for z in seeds for d in (-0.5, 0.5)]
        scored = [(c,) + assess(c) for c in cands]
        good = [s for s in scored if s[2] >= min_clearance]
        if good:
            c, _, _ = min(good, key=lambda s: (s[1], -s[2]))
        else:
            c, _, _ = max(scored, key=lambda s: s[2])
        base_re = float(c)
    n_corr, clearance = assess(base_re)
    if clearance < PATH_CLEARANCE:
        raise PoleTooClose(
            f"integration line Re r = {base_re} passes within "
            f"{clearance:.1e} of a pole", {"base_re": base_re})

    wrong = [(z, 1) for z in _dedupe([z for z in lpts if z.real > base_re])]
    wrong += [(z, -1) for z in _dedupe([z for z in rpts if z.real < base_re])]
    every = _dedupe(list(lpts) + list(rpts))
    corrections = []
    for z, sgn in wrong:
        others = [abs(z - w) for w in every if abs(z - w) > 1e-8]
        near = min(others) if others else 1.0
        corrections.append(Correction(complex(z), sgn,
                                      float(min(0.25, 0.45 * near))))
    near_line = tuple(sorted({round(z.imag, 12) for z in every
                              if abs(z.real - base_re) < 0.5}))
    return ContourSpec(base_re=base_re, corrections=tuple(corrections),
                       decay_rate=float(decay_rate), clearance=clearance,
                       pole_heights=near_line)


def residue_at(f, pole, radius, n_nodes=64, tol=1e-11, max_nodes=16384):
    """Residue of ``f`` at an isolated singularity by circle quadrature.

    The trapezoidal rule on ``|z - pole| = radius`` converges geometrically
    for integrands analytic in an annulus; the node count is doubled until
    two successive estimates agree to ``tol``.

    Parameters
    ----------
    f : callable
        Vectorised complex function.
    pole : complex
    radius : float
        No other singularity may lie within ``2 * radius`` of ``pole``.
    """
    pole = complex(pole)
    prev = None
    n = n_nodes
    while n <= max_nodes:
        ang = np.exp(2j * np.pi * np.arange(n) / n)
        dz = radius * ang
        vals = np.asarray(f(pole + dz), dtype=complex) * dz
        if not np.all(np.isfinite(vals)):
            raise NonConvergent("integrand not finite on the residue circle",
                                {"pole": str(pole), "radius": radius})
        res = vals.mean()
        scale = np.abs(vals).mean()
        if prev is not None and abs(res - prev) <= tol * max(abs(res), scale):
            return complex(res)
        prev = res
        n *= 2
    raise NonConvergent("residue quadrature did not converge",
                        {"pole": str(pole), "radius": radius})


def empirical_decay(f, base_re, height, step=0.5):
    """Observed decay rates ``-d log|f| / d|y|`` near ``y = +height`` and
    ``y = -height`` (upper, lower), averaged over one ``step``."""
    y = np.array([height - step, height, -height + step, -height])
    mag = np.abs(np.asarray(f(base_re + 1j * y)))
    with np.errstate(divide="ignore"):
        up = np.log(mag[0] / mag[1]) / step
        down = np.log(mag[2] / mag[3]) / step
    return float(up), float(down)


def integrate_contour(f, spec, settings=DEFAULT_SETTINGS):
    """Evaluate ``int_C f(r) dr/i`` for a planned contour.

    Parameters
    ----------
    f : callable
        Vectorised integrand, complex array in and out.
    spec : ContourSpec
    settings : QuadSettings

    Returns
    -------
    ContourResult
        Value, combined error estimate (quadrature + tail + residues), the
        tail bound ``(|f(iT)| + |f(-iT)|)/kappa`` and the height used.
    """
    base = spec.base_re
    kappa = spec.decay_rate

    def line(y):
        return f(base + 1j * np.asarray(y, dtype=float))

    # magnitude scale from a coarse scan
    ys = np.linspace(-3, 3, 25)
    scale = float(np.sum(np.abs(line(ys)))) * (ys[1] - ys[0])
    if not np.isfinite(scale):
        raise PoleTooClose("integrand not finite on the integration line",
                           {"base_re": base})
    target = max(settings.rel_tol * scale, settings.abs_tol)

    def tail(T):
        return float(np.sum(np.abs(line(np.array([T, -T]))))) / kappa

    if spec.trunc_height is not None:
        T = float(spec.trunc_height)
    else:
        T = 1.0
        while tail(T) > 0.1 * target:
            T += 0.5
            if T > 200:
                raise NumericalError("integrand does not decay along the line",
                                     {"base_re": base})
    brk = list(np.arange(-T, T, 0.5)[1:])
    brk += [h for h in spec.pole_heights if -T < h < T]
    val, err = integrate_real(line, -T, T, settings, breakpoints=brk)
    tb = tail(T)
    for c in spec.corrections:
        res = residue_at(f, c.pole, c.radius, tol=settings.rel_tol)
        val += c.sign * 2 * np.pi * res
        err += 2 * np.pi * settings.rel_tol * abs(res)
    return ContourResult(complex(val), float(err + tb), tb, T, spec)


def pt_integrand_shifts(a, p):
    """Constant parts of the S-function arguments in the J_PT integrand.

    The integrand is ``prod_i S(c_i + r) / prod_j S(d_j + r)``; returns
    ``(c, d)`` as two lists of four complex numbers.
    """
    Q = p.q_charge
    b1, b2, b3 = (complex(v) for v in a.beta)
    s1, s2, s3 = (complex(v) for v in a.sigma)
    c = [Q - b2 / 2 + s3 - s2, -b2 / 2 + s3 + s2,
         Q - b3 / 2 + s3 - s1, b3 / 2 + s3 - s1]
    d = [2 * Q - b1 / 2 - b2 / 2 + s3 - s1, Q + b1 / 2 - b2 / 2 + s3 - s1,
         2 * s3, Q + 0j]
    return c, d


def pt_pole_seeds(a, p):
    """Left and right pole lattices of the J_PT integrand.

    Left seeds: ``b2/2 - s2 - s3``, ``b2/2 - Q + s2 - s3``,
    ``-b3/2 - s3 + s1``, ``b3/2 - Q - s3 + s1``.  Right seeds:
    ``-b1/2 + b2/2 - s3 + s1``, ``-Q + b1/2 + b2/2 - s3 + s1``,
    ``Q - 2 s3`` and ``0``.
    """
    Q = p.q_charge
    c, d = pt_integrand_shifts(a, p)
    left = [PoleLattice(-c[1], Direction.LEFT, "b2/2-s2-s3"),
            PoleLattice(-c[0], Direction.LEFT, "b2/2-Q+s2-s3"),
            PoleLattice(-c[3], Direction.LEFT, "-b3/2-s3+s1"),
            PoleLattice(-c[2], Direction.LEFT, "b3/2-Q-s3+s1")]
    right = [PoleLattice(Q - d[1], Direction.RIGHT, "-b1/2+b2/2-s3+s1"),
             PoleLattice(Q - d[0], Direction.RIGHT, "-Q+b1/2+b2/2-s3+s1"),
             PoleLattice(Q - d[2], Direction.RIGHT, "Q-2s3"),
             PoleLattice(0j, Direction.RIGHT, "0")]
    return left, right


def hos_pole_seeds(alpha, beta, p):
    """Left and right pole lattices of the Hosomichi integrand.

    Left seeds ``(Q - alpha - beta/2)/2`` and ``(alpha - beta/2 - Q)/2``;
    right seeds ``(alpha + beta/2 - Q)/2`` and ``(Q - alpha + beta/2)/2``.
    """
    Q = p.q_charge
    alpha, beta = complex(alpha), complex(beta)
    left = [PoleLattice((Q - alpha - beta / 2) / 2, Direction.LEFT,
                        "(Q-a-b/2)/2"),
            PoleLattice((alpha - beta / 2 - Q) / 2, Direction.LEFT,
                        "(a-b/2-Q)/2")]
    right = [PoleLattice((alpha + beta / 2 - Q) / 2, Direction.RIGHT,
                         "(a+b/2-Q)/2"),
             PoleLattice((Q - alpha + beta / 2) / 2, Direction.RIGHT,
                         "(Q-a+b/2)/2")]
    return left, right
