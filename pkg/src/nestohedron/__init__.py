"""Nested set complexes, nested fans and nested polytopes of building sets."""

from .building import (
    BuildingSet,
    Graph,
    contraction,
    from_lists,
    graphical_from_graph,
    is_graphical,
    product,
    restriction,
    validate_building,
)
from .errors import InvalidInput, NestedError, TooLarge, VerificationError
from .fan import QuotientLattice, nested_expansion, verify_fan
from .nested import dual_graph, enumerate_complex, is_nested, link
from .polytope import SupportFunction, realize, verify_normal_fan, vertices

__all__ = [
    "BuildingSet",
    "Graph",
    "InvalidInput",
    "NestedError",
    "QuotientLattice",
    "SupportFunction",
    "TooLarge",
    "VerificationError",
    "contraction",
    "dual_graph",
    "enumerate_complex",
    "from_lists",
    "graphical_from_graph",
    "is_graphical",
    "is_nested",
    "link",
    "nested_expansion",
    "product",
    "realize",
    "restriction",
    "validate_building",
    "verify_fan",
    "verify_normal_fan",
    "vertices",
]

__version__ = "0.1.0"
