"""MAX-CUT by recursive quantum random access optimization on matrix product states."""

from .datasets import rnd14
from .graph import Graph, cut_weight, generate, parse_rudy, read_graph
from .qrac import PauliAssignment, assign_paulis, build_terms
from .solver import (
    RqraoParams,
    SolveReport,
    brute_solve,
    qrao_solve,
    rank_two_solve,
    rqaoa_solve,
    rqrao_solve,
    tree_rounding_solve,
)

__all__ = [
    "Graph",
    "PauliAssignment",
    "RqraoParams",
    "SolveReport",
    "assign_paulis",
    "brute_solve",
    "build_terms",
    "cut_weight",
    "generate",
    "parse_rudy",
    "qrao_solve",
    "rank_two_solve",
    "read_graph",
    "rnd14",
    "rqaoa_solve",
    "rqrao_solve",
    "tree_rounding_solve",
]
