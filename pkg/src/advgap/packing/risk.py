"""Optimal adversarial risks and the randomization gap from packing optima.

One minus the best integral packing of the conflict hypergraph is the optimal
deterministic risk; the fractional optimum gives the randomized one.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from ..config import Settings, get_settings
from ..conflict import ConflictHypergraph, ConflictStructures, build_conflict_hypergraph
from ..errors import SolverBudgetExceeded
from ..models import DiscreteDistribution, NormSpec
from .branch_and_bound import solve_integral
from .instance import FractionalSolution, IntegralSolution, PackingInstance
from .simplex import solve_fractional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PackingValues:
    """Integral and fractional optima on the conflict graph, hypergraph and clique hypergraph."""

    ip_G: Fraction
    ip_H: Fraction
    ip_C: Fraction
    fp_G: Fraction
    fp_H: Fraction
    fp_C: Fraction


def require_proven(solution: IntegralSolution) -> IntegralSolution:
    if not solution.proven_optimal:
        raise SolverBudgetExceeded(solution.value, solution.bound, solution.nodes)
    return solution


def solve_integral_proven(
    inst: PackingInstance, *, settings: Settings | None = None
) -> IntegralSolution:
    return require_proven(solve_integral(inst, settings=settings))


def _hypergraph(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, settings: Settings
) -> ConflictHypergraph:
    return build_conflict_hypergraph(dist, eps, norm, settings=settings)


def optimal_packings(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    *,
    hypergraph: ConflictHypergraph | None = None,
    settings: Settings | None = None,
) -> tuple[FractionalSolution, IntegralSolution]:
    settings = settings or get_settings()
    h = hypergraph or _hypergraph(dist, eps, norm, settings)
    inst = PackingInstance.from_hypergraph(h, dist.weights)
    fractional = solve_fractional(inst)
    integral = solve_integral_proven(inst, settings=settings)
    logger.info("Packing optima on H: FP=%s IP=%s", fractional.value, integral.value)
    return fractional, integral


def deterministic_adversarial_risk(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> Fraction:
    settings = settings or get_settings()
    inst = PackingInstance.from_hypergraph(_hypergraph(dist, eps, norm, settings), dist.weights)
    return 1 - solve_integral_proven(inst, settings=settings).value


def randomized_adversarial_risk(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> Fraction:
    settings = settings or get_settings()
    inst = PackingInstance.from_hypergraph(_hypergraph(dist, eps, norm, settings), dist.weights)
    return 1 - solve_fractional(inst).value


def randomization_gap(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> Fraction:
    fractional, integral = optimal_packings(dist, eps, norm, settings=settings)
    return fractional.value - integral.value


def packing_values(
    structures: ConflictStructures,
    weights: Sequence[Fraction],
    *,
    settings: Settings | None = None,
) -> PackingValues:
    settings = settings or get_settings()
    instances = {
        "G": PackingInstance.from_graph(structures.graph, weights),
        "H": PackingInstance.from_hypergraph(structures.hypergraph, weights),
        "C": PackingInstance.from_hypergraph(structures.cliques, weights),
    }
    solved: dict[frozenset[frozenset[int]], tuple[Fraction, Fraction]] = {}
    ip: dict[str, Fraction] = {}
    fp: dict[str, Fraction] = {}
    for key, inst in instances.items():
        family = frozenset(inst.constraints)
        if family not in solved:
            solved[family] = (
                solve_integral_proven(inst, settings=settings).value,
                solve_fractional(inst).value,
            )
        ip[key], fp[key] = solved[family]
    return PackingValues(ip["G"], ip["H"], ip["C"], fp["G"], fp["H"], fp["C"])
