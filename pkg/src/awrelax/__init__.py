"""Aw-Rascle traffic model with relaxation: viscous solver, invariant region
and relaxation-limit diagnostics."""

from .model import ModelConfig, State
from .region import Region
from .scalar import ScalarFlux
from .viscous import FieldPair, Grid, RelaxationSolver, SolverParams

__all__ = ["ModelConfig", "State", "Region", "ScalarFlux", "FieldPair", "Grid",
           "RelaxationSolver", "SolverParams"]
