"""Exact circuits-in-a-class toolkit for finite multigraphs.

Detect, count, and length-minimize circuits with a prescribed
abelianization, and plan one-carrier routes for adjacent-pair demands.
All arithmetic is exact (integers and rationals end to end).
"""

from .chains import (
    Chain,
    SupportComponent,
    SupportInfo,
    abelianize,
    chain_leq,
    cycle_basis,
    is_circulation,
    l1_norm,
    support_info,
)
from .counting import (
    CircuitCount,
    count_circuits,
    determinant,
    enumerate_circuits,
    reduced_determinant,
    weighted_laplacian,
)
from .detect import detect_circuit
from .errors import DomainError
from .graph import (
    Circuit,
    Contraction,
    Dart,
    Doubling,
    Edge,
    Graph,
    Subgraph,
    Walk,
    build_graph,
    contract,
    double,
    edge_subgraph,
    make_walk,
    rotate_closed_walk,
    translate_circuit,
    validate_circuit,
    walk_mu_length,
)
from .routing import (
    RoutePlan,
    TaskMatrix,
    brute_force_route,
    lift_tasks,
    min_circulation_above,
    solve_routing,
)
from .shortest import (
    ShortestCircuit,
    brute_force_shortest,
    shortest_circuit,
    steiner_tree,
    tree_tour,
)

__all__ = [
    "Chain",
    "Circuit",
    "CircuitCount",
    "Contraction",
    "Dart",
    "DomainError",
    "Doubling",
    "Edge",
    "Graph",
    "RoutePlan",
    "ShortestCircuit",
    "Subgraph",
    "SupportComponent",
    "SupportInfo",
    "TaskMatrix",
    "Walk",
    "abelianize",
    "brute_force_route",
    "brute_force_shortest",
    "build_graph",
    "chain_leq",
    "contract",
    "count_circuits",
    "cycle_basis",
    "detect_circuit",
    "determinant",
    "double",
    "edge_subgraph",
    "enumerate_circuits",
    "is_circulation",
    "l1_norm",
    "lift_tasks",
    "make_walk",
    "min_circulation_above",
    "reduced_determinant",
    "rotate_closed_walk",
    "shortest_circuit",
    "solve_routing",
    "steiner_tree",
    "support_info",
    "translate_circuit",
    "tree_tour",
    "validate_circuit",
    "walk_mu_length",
    "weighted_laplacian",
]
