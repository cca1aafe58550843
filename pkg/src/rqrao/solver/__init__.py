"""Recursive QRAO and the baselines it is compared against."""

from .ensemble import ensemble_energies, ensemble_energy
from .rank2 import hyperplane_round, local_search, rank_two_solve, round_angles
from .report import ReportError, RqraoParams, SolveReport
from .rqaoa import beta_formula, best_beta, edge_zz, level1_objective, pair_states, rqaoa_solve, search_gamma
from .rqrao import SolveError, brute_solve, qrao_solve, rqrao_solve, tree_rounding_solve

__all__ = [
    "ReportError",
    "RqraoParams",
    "SolveError",
    "SolveReport",
    "best_beta",
    "beta_formula",
    "brute_solve",
    "edge_zz",
    "ensemble_energies",
    "ensemble_energy",
    "hyperplane_round",
    "level1_objective",
    "local_search",
    "pair_states",
    "qrao_solve",
    "rank_two_solve",
    "round_angles",
    "rqaoa_solve",
    "rqrao_solve",
    "search_gamma",
    "tree_rounding_solve",
]
