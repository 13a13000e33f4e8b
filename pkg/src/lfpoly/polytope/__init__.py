"""Exact polytope machinery: double description, exact LP, symmetry classes."""
from .types import (
    DimensionError,
    EmptyPolytopeError,
    HPolytope,
    Inequality,
    Inside,
    MembershipResult,
    Outside,
    PolytopeError,
    UnboundedError,
    VPolytope,
)
from .ops import (
    PolytopeComparison,
    affine_hull,
    compare_polytopes,
    facet_enum,
    is_extreme_in_hrep,
    is_facet,
    membership,
    polytope_equal,
    remove_redundant,
    vertex_enum,
)
from .symmetry import Canonicalizer, SymmetryGroup, canonicalize_inequality, ns_chart

__all__ = [
    "Canonicalizer", "DimensionError", "EmptyPolytopeError", "HPolytope", "Inequality", "Inside",
    "MembershipResult", "Outside", "PolytopeComparison", "PolytopeError", "SymmetryGroup",
    "UnboundedError", "VPolytope", "affine_hull", "canonicalize_inequality", "compare_polytopes",
    "facet_enum", "is_extreme_in_hrep", "is_facet", "membership", "ns_chart", "polytope_equal",
    "remove_redundant", "vertex_enum",
]
