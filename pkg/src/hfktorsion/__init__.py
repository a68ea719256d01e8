"""Knot Floer torsion orders and the topological bounds they imply."""

from .algebra import PolyV, SparseMat, poly_divmod, poly_gcd, smith_normal_form
from .bounds import (
    CobordismData,
    bound_report,
    cobordism_consistency,
    refined_distance_lower,
    ribbon_concordance_check,
    ribbon_distance_lower,
    surface_norm,
)
from .complex import BigradedComplex, GradedComplex, dual, set_u_zero, tensor, validate
from .errors import HFKError
from .homology import (
    ModuleDecomp,
    bigraded_homology,
    c_ord_chain_interval,
    c_ord_uv,
    c_ord_v,
    decompose_graded,
    ord_v,
    torsion_distance,
)
from .knots import AlexPoly, parse, realize_bigraded, realize_graded, torus_alexander

__version__ = "0.1.0"

__all__ = [
    "AlexPoly",
    "BigradedComplex",
    "CobordismData",
    "GradedComplex",
    "HFKError",
    "ModuleDecomp",
    "PolyV",
    "SparseMat",
    "bigraded_homology",
    "bound_report",
    "c_ord_chain_interval",
    "c_ord_uv",
    "c_ord_v",
    "cobordism_consistency",
    "decompose_graded",
    "dual",
    "ord_v",
    "parse",
    "poly_divmod",
    "poly_gcd",
    "realize_bigraded",
    "realize_graded",
    "refined_distance_lower",
    "ribbon_concordance_check",
    "ribbon_distance_lower",
    "set_u_zero",
    "smith_normal_form",
    "surface_norm",
    "tensor",
    "torsion_distance",
    "torus_alexander",
    "validate",
]
