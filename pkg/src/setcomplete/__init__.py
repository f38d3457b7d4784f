"""Consistent low-rank matrix completion by subspace evolution and transfer."""

from .evolution import EvolutionResult, LineSearchConfig, evolve
from .matrix_core import ObservedMatrix, read_observed, write_dense
from .objective import Fit, ZeroGradient, fit, gradient, search_direction
from .solver import SolverConfig, SolverReport, SolverStatus, residual_relative, set_complete
from .transfer import BarrierReport, detect_barriers, transfer

__all__ = [
    "BarrierReport",
    "EvolutionResult",
    "Fit",
    "LineSearchConfig",
    "ObservedMatrix",
    "SolverConfig",
    "SolverReport",
    "SolverStatus",
    "ZeroGradient",
    "detect_barriers",
    "evolve",
    "fit",
    "gradient",
    "read_observed",
    "residual_relative",
    "search_direction",
    "set_complete",
    "transfer",
    "write_dense",
]

__version__ = "0.1.0"
