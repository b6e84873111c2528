"""Exact set packing solvers and the adversarial risk wrappers built on them."""

from .branch_and_bound import solve_integral
from .instance import FractionalSolution, IntegralSolution, PackingInstance, verify_fractional
from .risk import (
    PackingValues,
    deterministic_adversarial_risk,
    optimal_packings,
    packing_values,
    randomization_gap,
    randomized_adversarial_risk,
    require_proven,
)
from .simplex import solve_fractional

__all__ = [
    "FractionalSolution",
    "IntegralSolution",
    "PackingInstance",
    "PackingValues",
    "deterministic_adversarial_risk",
    "optimal_packings",
    "packing_values",
    "randomization_gap",
    "randomized_adversarial_risk",
    "require_proven",
    "solve_fractional",
    "solve_integral",
    "verify_fractional",
]
