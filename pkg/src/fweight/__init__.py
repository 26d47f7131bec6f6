"""Exact f-weight calculus on finite sets of binary strings."""

from .core import (
    ConvexityError,
    CylinderSet,
    DomainDepthError,
    FWeightError,
    InvariantError,
    PreconditionError,
    WeightFunction,
    covers,
    cylinder_measure,
    minimal_elements,
)
from .weights import WeightReport, dwt, is_convex, pwt, vwt_bruteforce, vwt_convex, vwt_depth_bounded
from .goodcover import build_cover, extend_cover, verify_good_cover
from .kraft import kraft_chaitin_assign

__all__ = [
    "ConvexityError",
    "CylinderSet",
    "DomainDepthError",
    "FWeightError",
    "InvariantError",
    "PreconditionError",
    "WeightFunction",
    "WeightReport",
    "build_cover",
    "covers",
    "cylinder_measure",
    "dwt",
    "extend_cover",
    "is_convex",
    "kraft_chaitin_assign",
    "minimal_elements",
    "pwt",
    "verify_good_cover",
    "vwt_bruteforce",
    "vwt_convex",
    "vwt_depth_bounded",
]
