"""Sparse LP model, embedded simplex solver and MPS I/O."""
from .model import LinearProgram, LPError
from .mps import read_mps, write_mps
from .simplex import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    Solution,
    SolveOptions,
    SolverError,
    solve,
    write_solution_csv,
)

__all__ = [
    "LinearProgram", "LPError", "read_mps", "write_mps", "Solution", "SolveOptions", "SolverError",
    "solve", "write_solution_csv", "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "ITERATION_LIMIT",
]
