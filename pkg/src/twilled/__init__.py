"""Exact Hochschild cochain calculus on split spaces A1 ⊕ A2: brackets,
bidegrees, twisting, and Rota-Baxter-type operator checks."""
from .algebra import (
    Algebra,
    Bimodule,
    LinearOp,
    check_associativity,
    check_cyclic_cocycle,
    check_invariance,
    dual_bimodule,
    semidirect_product,
)
from .bigraded import (
    ProtoStructure,
    SplitContext,
    StructureClass,
    bidegree_of,
    check_proto_conditions,
    classify,
    decompose_structure,
    lift,
    lift_map,
    project_bidegree,
)
from .cochain import (
    Cochain,
    bar_comp,
    comp_i,
    cup_product,
    derived_bracket,
    g_bracket,
    hochschild_d,
    tribracket,
)
from .scalars import rational
from .twisting import check_twist_isomorphism, twist, twist_closed_form, twist_series, twist_substructures

__version__ = "0.1.0"
