"""Matrix-product states, Pauli-sum MPOs, and energy maximization."""

from .mpo import CODES, MPO, MPOError, build_mpo
from .mps import MPS, MPSError, bond_dims, init_mps, load_mps, product_mps, save_mps
from .ops import (
    DimensionError,
    edge_energies,
    expectation,
    gradient,
    pauli_expectations,
    site_expectations,
    value_and_grad,
)
from .optim import OptimizeResult, OptimizerConfig, lbfgs, optimize

__all__ = [
    "CODES",
    "DimensionError",
    "MPO",
    "MPOError",
    "MPS",
    "MPSError",
    "OptimizeResult",
    "OptimizerConfig",
    "bond_dims",
    "build_mpo",
    "edge_energies",
    "expectation",
    "gradient",
    "init_mps",
    "lbfgs",
    "load_mps",
    "optimize",
    "pauli_expectations",
    "product_mps",
    "save_mps",
    "site_expectations",
    "value_and_grad",
]
