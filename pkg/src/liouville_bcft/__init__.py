"""Exact boundary Liouville structure constants and their identities.

Modules
-------
numerics
    Adaptive Gauss-Kronrod quadrature and limit extrapolation.
specialfn
    Double Gamma and double Sine functions, Gauss hypergeometric function
    and its connection matrices.
contour
    Pole lattices, contour planning and vertical-line integration.
structure_constants
    Boundary three-point function, bulk-boundary constant, boundary
    reflection coefficient, fusion and modular kernels, correlators.
verify
    Numerical checks of the functional identities.
cli
    Command-line front end.
"""
from .errors import LiouvilleError
from .numerics import DEFAULT_SETTINGS, QuadSettings
from .specialfn import (HypParams, LiouvilleParams, double_gamma,
                        double_sine, hyp2f1)
from .structure_constants import (BulkBoundaryArgs, KernelArgs,
                                  ReflectionArgs, ThreePointArgs, g_hos,
                                  h_pt, j_hos, j_pt, r_fzz)

__version__ = "0.1.0"

__all__ = [
    "LiouvilleError", "DEFAULT_SETTINGS", "QuadSettings", "HypParams",
    "LiouvilleParams", "double_gamma", "double_sine", "hyp2f1",
    "BulkBoundaryArgs", "KernelArgs", "ReflectionArgs", "ThreePointArgs",
    "g_hos", "h_pt", "j_hos", "j_pt", "r_fzz",
]
