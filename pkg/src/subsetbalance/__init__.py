"""Exact solvers for Subset Balancing: find a nonzero c in C^n with
c.x = 0, for coefficient sets [-d:d] and [+-d]."""

from .core import (
    ALL,
    CoefficientSet,
    Combine,
    EpsBalanced,
    EpsUnbalanced,
    GuardExceeded,
    Instance,
    Outcome,
    Planted,
    PlantingError,
    SetKind,
    Solution,
    SolutionProfile,
    SolverReport,
    UniformRange,
    enumerate_profiles,
    gen_instance,
    is_eps_unbalanced,
    is_solution,
    profile_of,
    rerandomize,
)
from .ess import solve_ess
from .mitm import classic_mitm, unbalanced_sb
from .oracle import brute_force_solve, count_solutions
from .rep_with0 import solve_with0
from .rep_without0 import solve_without0

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "CoefficientSet",
    "Combine",
    "EpsBalanced",
    "EpsUnbalanced",
    "GuardExceeded",
    "Instance",
    "Outcome",
    "Planted",
    "PlantingError",
    "SetKind",
    "Solution",
    "SolutionProfile",
    "SolverReport",
    "UniformRange",
    "brute_force_solve",
    "classic_mitm",
    "count_solutions",
    "enumerate_profiles",
    "gen_instance",
    "is_eps_unbalanced",
    "is_solution",
    "profile_of",
    "rerandomize",
    "solve_ess",
    "solve_with0",
    "solve_without0",
    "unbalanced_sb",
    "__version__",
]
