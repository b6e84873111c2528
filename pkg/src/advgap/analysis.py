"""Structural diagnoses behind a positive randomization gap.

A gap needs either a clique of the conflict graph that is not a hyperedge
(non-conformality) or an odd hole / odd anti-hole in the conflict graph
(non-perfectness). ``decompose_gap`` splits the gap into the two matching terms.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from .config import Settings, get_settings
from .conflict import (
    CliqueHypergraph,
    ConflictHypergraph,
    ConflictStructures,
    VertexSet,
    build_structures,
    hyperedge_contains,
)
from .errors import InvariantViolation
from .models import DiscreteDistribution, NormSpec, PlainGraph
from .packing import (
    FractionalSolution,
    IntegralSolution,
    PackingInstance,
    require_proven,
    solve_fractional,
    solve_integral,
)

logger = logging.getLogger(__name__)


class PerfectStatus(str, Enum):
    perfect = "Perfect"
    not_perfect = "NotPerfect"
    inconclusive = "Inconclusive"


@dataclass(frozen=True)
class PerfectnessResult:
    status: PerfectStatus
    witness: tuple[int, ...] | None = None
    kind: str | None = None
    max_len: int = 5


class ConformalityCheck(NamedTuple):
    conformal: bool
    witness: VertexSet | None


@dataclass(frozen=True)
class GapReport:
    fp_H: Fraction
    fp_C: Fraction
    ip: Fraction
    gap: Fraction
    term_conformal: Fraction
    term_perfect: Fraction
    conformal: bool
    conformal_witness: VertexSet | None
    perfect: PerfectnessResult
    fractional_H: FractionalSolution
    fractional_C: FractionalSolution
    integral: IntegralSolution


def check_conformal(h: ConflictHypergraph, c: CliqueHypergraph) -> ConformalityCheck:
    """Every maximal clique must be a hyperedge; returns the first one that is not."""

    if h.n != c.n:
        raise ValueError(f"hypergraphs differ in size: {h.n} vs {c.n}")
    for clique in c.max_edges:
        if not hyperedge_contains(h, clique):
            return ConformalityCheck(False, clique)
    return ConformalityCheck(True, None)


def _largest_odd(limit: int) -> int:
    return limit if limit % 2 else limit - 1


def default_max_len(n: int, *, exhaustive: bool = False, cap: int = 13) -> int:
    if exhaustive:
        return max(5, _largest_odd(n))
    return max(5, _largest_odd(min(n, cap)))


def _hole_of_length(adjacency: list[set[int]], start: int, length: int) -> tuple[int, ...] | None:
    """Induced cycle through ``start`` (its smallest vertex) of exactly ``length`` vertices."""

    path = [start]
    on_path = {start}

    def extend() -> bool:
        depth = len(path)
        for w in sorted(adjacency[path[-1]]):
            if w <= start or w in on_path:
                continue
            if any(u in adjacency[w] for u in path[1:-1]):
                continue
            touches_start = depth >= 2 and start in adjacency[w]
            if depth + 1 == length:
                if touches_start and path[1] < w:
                    path.append(w)
                    return True
                continue
            if touches_start:
                continue
            path.append(w)
            on_path.add(w)
            if extend():
                return True
            path.pop()
            on_path.discard(w)
        return False

    return tuple(path) if extend() else None


def find_odd_hole(g: PlainGraph, max_len: int) -> tuple[int, ...] | None:
    """Shortest odd induced cycle of length 5..max_len, smallest start vertex first."""

    if max_len < 5 or max_len % 2 == 0:
        raise ValueError(f"max_len must be odd and at least 5, got {max_len}")
    adjacency = g.adjacency()
    for length in range(5, min(max_len, g.n) + 1, 2):
        for start in range(g.n):
            cycle = _hole_of_length(adjacency, start, length)
            if cycle is not None:
                logger.debug("odd hole of length %d: %s", length, cycle)
                return cycle
    return None


def check_perfect(
    g: PlainGraph, max_len: int | None = None, *, settings: Settings | None = None
) -> PerfectnessResult:
    settings = settings or get_settings()
    if max_len is None:
        max_len = default_max_len(g.n, exhaustive=settings.exhaustive, cap=settings.hole_cap)
    if max_len < 5 or max_len % 2 == 0:
        raise ValueError(f"max_len must be odd and at least 5, got {max_len}")

    complement = g.complement()
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            hole_job = pool.submit(find_odd_hole, g, max_len)
            antihole_job = pool.submit(find_odd_hole, complement, max_len)
            hole, antihole = hole_job.result(), antihole_job.result()
    else:
        hole = find_odd_hole(g, max_len)
        antihole = None if hole is not None else find_odd_hole(complement, max_len)

    if hole is not None:
        return PerfectnessResult(PerfectStatus.not_perfect, hole, "hole", max_len)
    if antihole is not None:
        return PerfectnessResult(PerfectStatus.not_perfect, antihole, "antihole", max_len)
    if g.n < 5 or max_len >= _largest_odd(g.n):
        return PerfectnessResult(PerfectStatus.perfect, max_len=max_len)
    return PerfectnessResult(PerfectStatus.inconclusive, max_len=max_len)


def decompose_gap(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    *,
    structures: ConflictStructures | None = None,
    settings: Settings | None = None,
) -> GapReport:
    settings = settings or get_settings()
    structures = structures or build_structures(dist, eps, norm, settings=settings)
    inst_h = PackingInstance.from_hypergraph(structures.hypergraph, dist.weights)
    inst_c = PackingInstance.from_hypergraph(structures.cliques, dist.weights)

    fractional_h = solve_fractional(inst_h)
    fractional_c = solve_fractional(inst_c)
    integral = require_proven(solve_integral(inst_c, settings=settings))
    integral_h = require_proven(solve_integral(inst_h, settings=settings))
    if integral_h.value != integral.value:
        raise InvariantViolation(
            f"integral optima differ: IP(H)={integral_h.value}, IP(C)={integral.value}"
        )

    conformality = check_conformal(structures.hypergraph, structures.cliques)
    perfectness = check_perfect(structures.graph, settings=settings)

    term_conformal = fractional_h.value - fractional_c.value
    term_perfect = fractional_c.value - integral.value
    gap = fractional_h.value - integral.value
    if term_conformal < 0 or term_perfect < 0:
        raise InvariantViolation(
            f"negative gap term: conformal={term_conformal}, perfect={term_perfect}"
        )
    if gap > 0 and conformality.conformal and perfectness.status is PerfectStatus.perfect:
        raise InvariantViolation(f"gap {gap} on a conformal hypergraph with a perfect graph")

    logger.info(
        "Gap %s = %s (conformality) + %s (perfectness)", gap, term_conformal, term_perfect
    )
    return GapReport(
        fp_H=fractional_h.value,
        fp_C=fractional_c.value,
        ip=integral.value,
        gap=gap,
        term_conformal=term_conformal,
        term_perfect=term_perfect,
        conformal=conformality.conformal,
        conformal_witness=conformality.witness,
        perfect=perfectness,
        fractional_H=fractional_h,
        fractional_C=fractional_c,
        integral=integral,
    )
