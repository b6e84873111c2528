"""Point sets whose pairwise eps-ball overlaps realize a given graph."""

from __future__ import annotations

import logging
from fractions import Fraction

from ..config import Settings, get_settings
from ..conflict import build_conflict_graph
from ..errors import ConstructionError
from ..models import DiscreteDistribution, NormSpec, PlainGraph, Point
from .coloring import greedy_coloring

logger = logging.getLogger(__name__)

EDGE_SHRINK = 1 - 1e-6
MAX_DENOMINATOR = 10**12


def _require_positive(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if eps <= 0:
        raise ConstructionError(f"eps must be positive, got {eps}")
    return eps


def embed_linf(g: PlainGraph, eps: Fraction) -> list[Point]:
    """Cubicity embedding in R^n: edges at l_inf distance <= 9/5 eps, non-edges at 11/5 eps."""

    eps = _require_positive(eps)
    near, far = Fraction(9, 5) * eps, Fraction(11, 5) * eps
    points = []
    for i in range(g.n):
        points.append(
            tuple(
                Fraction(0) if j == i else (near if g.has_edge(i, j) else far)
                for j in range(g.n)
            )
        )
    return points


def embed_lp(g: PlainGraph, eps: Fraction, norm: NormSpec) -> list[Point]:
    """Sphericity embedding in R^(n+m) for a finite exponent p.

    Edge coordinates are 1 on both endpoints and vertex ``i`` carries
    ``(n - deg_i)^(1/p)`` in its private coordinate, so an edge sums to
    ``2n - 2`` in p-th powers and a non-edge to ``2n``. Scaling by
    ``2 eps (2n - 2)^(-1/p)`` puts edges on the threshold; coordinates are
    rational approximations, so the scale is shrunk by ``1 - 1e-6``.
    """

    eps = _require_positive(eps)
    if norm.p is None:
        raise ConstructionError("embed_lp needs a finite exponent; use embed_linf for l_inf")
    p = float(norm.p)
    edges = g.sorted_edges()
    n = g.n
    raw_scale = 2 * float(eps) * max(2 * n - 2, 1) ** (-1 / p) * EDGE_SHRINK
    scale = Fraction(raw_scale).limit_denominator(MAX_DENOMINATOR)
    degree = [0] * n
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1

    points = []
    for i in range(n):
        private = Fraction((n - degree[i]) ** (1 / p)).limit_denominator(MAX_DENOMINATOR)
        incidence = [scale if i in edge else Fraction(0) for edge in edges]
        own = [scale * private if j == i else Fraction(0) for j in range(n)]
        points.append(tuple(incidence + own))
    return points


def graph_to_distribution(
    g: PlainGraph, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> DiscreteDistribution:
    """Uniform distribution whose conflict graph is exactly ``g`` (same vertex indexing)."""

    settings = settings or get_settings()
    if g.n < 1:
        raise ConstructionError("graph must have at least one vertex")
    points = embed_linf(g, eps) if norm.is_infinity else embed_lp(g, eps, norm)
    labels = greedy_coloring(g)
    dist = DiscreteDistribution.uniform(points, labels, max(labels))
    rebuilt = build_conflict_graph(dist, Fraction(eps), norm, settings=settings)
    if rebuilt != g:
        missing = sorted(g.edges - rebuilt.edges)[:3]
        extra = sorted(rebuilt.edges - g.edges)[:3]
        raise ConstructionError(
            f"embedding round-trip failed: missing edges {missing}, extra edges {extra}"
        )
    logger.info(
        "Embedded graph with %d vertices in dimension %d using %d classes",
        g.n, dist.dim, dist.num_classes,
    )
    return dist
