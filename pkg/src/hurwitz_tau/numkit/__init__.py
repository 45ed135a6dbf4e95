"""Numerical building blocks: jets, roots, contours, finite differences, AGM."""
from .agm import agm, ellipk_agm
from .differences import FDConfig, fd_derivative, fd_gradient
from .jets import Jet, schwarzian
from .quadrature import Arc, Contour, Segment, contour_integral, residue
from .roots import polynomial_roots, root_multiplicities

__all__ = [
    "Arc",
    "Contour",
    "FDConfig",
    "Jet",
    "Segment",
    "agm",
    "contour_integral",
    "ellipk_agm",
    "fd_derivative",
    "fd_gradient",
    "polynomial_roots",
    "residue",
    "root_multiplicities",
    "schwarzian",
]
