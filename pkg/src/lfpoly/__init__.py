"""Exact correlation polytopes for Bell and extended Wigner's-friend scenarios."""
from .scenario import Behaviour, Scenario, ScenarioError, coord_index, rationalize_behaviour, validate_behaviour
from .bell import ch_inequalities, ch_row, ld_vertices, lf_vertices, ns_vertices, pd_vertices, PDSpec, sw_vertices
from .polytope import HPolytope, Inequality, VPolytope, facet_enum, membership, polytope_equal, vertex_enum

__version__ = "0.1.0"

__all__ = [
    "Behaviour", "Scenario", "ScenarioError", "coord_index", "rationalize_behaviour", "validate_behaviour",
    "ch_inequalities", "ch_row", "ld_vertices", "lf_vertices", "ns_vertices", "pd_vertices", "PDSpec",
    "sw_vertices", "HPolytope", "Inequality", "VPolytope", "facet_enum", "membership", "polytope_equal",
    "vertex_enum",
]
