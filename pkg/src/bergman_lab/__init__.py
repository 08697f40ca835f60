"""Numerical laboratory for weighted Bergman kernels on explicit planar
domains: quadrature-built kernel models, Hartogs kernels via the fiber
series, Bergman metrics, and exact-arithmetic boundary-gap verification."""

__version__ = "0.1.0"

from .backend import BACKEND_NAME
from .domains import (
    HartogsDomain,
    NeighborhoodFamily,
    PlanarDomain,
    SignedDistanceValue,
    TubeDomain,
    boundary_samples,
    dk_bound_check,
    neighborhood_gap_profile,
    scaled_zalcman,
    signed_distance,
    tube_membership,
    zalcman_paper_family,
)
from .quadrature import (
    CellDecomposition,
    IntegralEstimate,
    decompose,
    integrate_hartogs,
    integrate_planar,
)
from .weights import Weight
