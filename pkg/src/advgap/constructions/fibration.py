"""Six-copy fibration: grows a triangle-free graph while capping independence growth at 4x.

Vertex ``v`` of copy ``c`` (copies numbered 0..5) gets index ``c * n + v``.
Iterating from a triangle-free base yields distributions whose randomization
gap approaches 1/2.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from ..config import Settings, get_settings
from ..errors import ConstructionError
from ..models import DiscreteDistribution, NormSpec, PlainGraph
from ..packing import PackingInstance, require_proven, solve_integral
from .embeddings import graph_to_distribution

logger = logging.getLogger(__name__)

COPIES = 6
SHRINK = Fraction(2, 3)


def fibrate(g: PlainGraph) -> PlainGraph:
    n = g.n
    edges: set[tuple[int, int]] = set()

    def vertex(v: int, copy: int) -> int:
        return (copy % COPIES) * n + v

    for copy in range(COPIES):
        nxt = copy + 1
        for u, v in g.edges:
            edges.add((vertex(u, copy), vertex(v, copy)))
            edges.add((vertex(u, copy), vertex(v, nxt)))
            edges.add((vertex(u, nxt), vertex(v, copy)))
        if copy < COPIES // 2:
            for v in range(n):
                edges.add((vertex(v, copy), vertex(v, copy + COPIES // 2)))
    return PlainGraph(COPIES * n, frozenset(edges))


def iterate_fibration(
    g0: PlainGraph, t: int, *, settings: Settings | None = None
) -> PlainGraph:
    settings = settings or get_settings()
    if t < 0:
        raise ConstructionError(f"fibration depth must be non-negative, got {t}")
    size = COPIES**t * g0.n
    if size > settings.fibration_max_vertices:
        raise ConstructionError(
            f"fibration depth {t} gives {size} vertices, above the cap of "
            f"{settings.fibration_max_vertices}"
        )
    graph = g0
    for level in range(t):
        graph = fibrate(graph)
        logger.info("Fibration level %d: %d vertices, %d edges", level + 1, graph.n, len(graph.edges))
    return graph


def independence_number(g: PlainGraph, *, settings: Settings | None = None) -> int:
    """Exact size of a maximum independent set."""

    if g.n == 0:
        return 0
    solution = require_proven(solve_integral(PackingInstance.from_graph(g), settings=settings))
    return int(solution.value)


def fibration_gap_lower_bound(alpha0: Fraction, t: int) -> Fraction:
    """``1/2 - (2/3)^t * alpha0`` for the base independence ratio ``alpha0 = alpha(g0) / |V(g0)|``.

    Non-positive values mean the bound says nothing.
    """

    return Fraction(1, 2) - SHRINK**t * Fraction(alpha0)


def fibration_depth_for(delta: Fraction, alpha0: Fraction) -> int:
    """Smallest ``t`` with ``(2/3)^t * alpha0 <= delta``."""

    delta = Fraction(delta)
    if delta <= 0:
        raise ConstructionError(f"delta must be positive, got {delta}")
    alpha0 = Fraction(alpha0)
    if alpha0 <= delta:
        return 0
    t = max(0, math.floor(math.log(float(delta / alpha0)) / math.log(2 / 3)) - 1)
    while SHRINK**t * alpha0 > delta:
        t += 1
    return t


def fibration_distribution(
    g0: PlainGraph,
    t: int,
    eps: Fraction,
    norm: NormSpec,
    *,
    settings: Settings | None = None,
) -> DiscreteDistribution:
    settings = settings or get_settings()
    return graph_to_distribution(iterate_fibration(g0, t, settings=settings), eps, norm, settings=settings)
