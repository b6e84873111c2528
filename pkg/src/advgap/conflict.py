"""Conflict graph, conflict hypergraph and clique hypergraph of a labeled distribution."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import networkx as nx

from .config import Settings, get_settings
from .errors import CliqueLimitExceeded, GeometryInconclusive
from .geometry import IntersectionStatus, balls_intersect, pairwise_conflict
from .models import DiscreteDistribution, NormSpec, PlainGraph

logger = logging.getLogger(__name__)

VertexSet = frozenset[int]


def _canonical(sets: Iterable[Iterable[int]]) -> tuple[VertexSet, ...]:
    return tuple(sorted({frozenset(s) for s in sets}, key=lambda s: (sorted(s), len(s))))


def maximal_sets(sets: Iterable[Iterable[int]]) -> tuple[VertexSet, ...]:
    """Drop every set contained in another one (antichain reduction)."""

    unique = sorted({frozenset(s) for s in sets}, key=len, reverse=True)
    kept: list[VertexSet] = []
    for candidate in unique:
        if not any(candidate <= other for other in kept):
            kept.append(candidate)
    return _canonical(kept)


class ConflictGraph(PlainGraph):
    """Pairwise conflicts: distinct labels and ``||x_i - x_j||_p <= 2 eps``."""


@dataclass(frozen=True)
class Hypergraph:
    """A downward closed set family over ``0..n-1`` stored by its maximal members."""

    n: int
    max_edges: tuple[VertexSet, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "max_edges", _canonical(self.max_edges))

    def contains(self, vertices: Iterable[int]) -> bool:
        return hyperedge_contains(self, vertices)

    def as_lists(self) -> list[list[int]]:
        return [sorted(e) for e in self.max_edges]


@dataclass(frozen=True)
class ConflictHypergraph(Hypergraph):
    """Maximal label-distinct sets whose eps-balls share a point.

    ``witnesses`` maps each maximal hyperedge to a point in the common
    intersection, as produced by the geometry oracle.
    """

    witnesses: Mapping[VertexSet, tuple[Any, ...]] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CliqueHypergraph(Hypergraph):
    """Maximal cliques of the conflict graph."""


@dataclass(frozen=True)
class ConflictStructures:
    graph: ConflictGraph
    hypergraph: ConflictHypergraph
    cliques: CliqueHypergraph


def hyperedge_contains(h: Hypergraph, vertices: Iterable[int]) -> bool:
    target = frozenset(vertices)
    return any(target <= edge for edge in h.max_edges)


def build_conflict_graph(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> ConflictGraph:
    settings = settings or get_settings()
    support = dist.support
    edges = set()
    for i in range(dist.n):
        for j in range(i + 1, dist.n):
            if support[i].label == support[j].label:
                continue
            if pairwise_conflict(support[i], support[j], eps, norm, settings.tol):
                edges.add((i, j))
    logger.info("Conflict graph: %d vertices, %d edges", dist.n, len(edges))
    return ConflictGraph(dist.n, frozenset(edges))


class _HyperedgeSearch:
    """Depth-first extension of label-distinct cliques, pruned on empty intersections."""

    def __init__(
        self, dist: DiscreteDistribution, eps: Fraction, norm: NormSpec,
        adjacency: list[set[int]], settings: Settings,
    ) -> None:
        self.dist = dist
        self.eps = eps
        self.norm = norm
        self.adjacency = adjacency
        self.settings = settings

    def verdict(
        self, vertices: tuple[int, ...], start: tuple[Any, ...] | None = None
    ) -> tuple[bool, tuple[Any, ...] | None]:
        result = balls_intersect(
            [self.dist.support[v] for v in vertices], self.eps, self.norm, self.settings.tol,
            max_iter=self.settings.geometry_max_iter, start=start,
        )
        if result.status is IntersectionStatus.inconclusive:
            raise GeometryInconclusive(vertices, result.margin)
        return result.nonempty, result.witness

    def from_root(self, root: int) -> dict[VertexSet, tuple[Any, ...]]:
        found: dict[VertexSet, tuple[Any, ...]] = {}
        _, witness = self.verdict((root,))
        stack = [((root,), witness, sorted(v for v in self.adjacency[root] if v > root))]
        while stack:
            members, witness, candidates = stack.pop()
            extended = False
            for v in reversed(candidates):
                grown = members + (v,)
                # the prefix center seeds the solve for its extension
                ok, grown_witness = self.verdict(grown, witness)
                if not ok:
                    continue
                extended = True
                remaining = [u for u in candidates if u > v and u in self.adjacency[v]]
                stack.append((grown, grown_witness, remaining))
            if not extended:
                found[frozenset(members)] = witness
        return found


def build_conflict_hypergraph(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    *,
    graph: ConflictGraph | None = None,
    settings: Settings | None = None,
) -> ConflictHypergraph:
    settings = settings or get_settings()
    graph = graph or build_conflict_graph(dist, eps, norm, settings=settings)
    adjacency = graph.adjacency()

    if graph.is_triangle_free():
        # Pairwise intersections are decided by the conflict test; witnesses are midpoints.
        edges: dict[VertexSet, tuple[Any, ...]] = {}
        for u, v in graph.sorted_edges():
            a, b = dist.support[u].coords, dist.support[v].coords
            edges[frozenset((u, v))] = tuple((x + y) / 2 for x, y in zip(a, b))
        for v in range(dist.n):
            if not adjacency[v]:
                edges[frozenset((v,))] = dist.support[v].coords
        logger.info("Conflict hypergraph (triangle-free): %d maximal hyperedges", len(edges))
        return ConflictHypergraph(dist.n, tuple(edges), edges)

    search = _HyperedgeSearch(dist, eps, norm, adjacency, settings)
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            partials = list(pool.map(search.from_root, range(dist.n)))
    else:
        partials = [search.from_root(root) for root in range(dist.n)]

    witnesses: dict[VertexSet, tuple[Any, ...]] = {}
    for partial in partials:
        witnesses.update(partial)
    maximal = maximal_sets(witnesses)
    logger.info("Conflict hypergraph: %d maximal hyperedges", len(maximal))
    return ConflictHypergraph(dist.n, maximal, {e: witnesses[e] for e in maximal})


def build_clique_hypergraph(
    g: PlainGraph, *, settings: Settings | None = None
) -> CliqueHypergraph:
    """All maximal cliques of ``g``; stops once more than ``clique_cap`` are found."""

    settings = settings or get_settings()
    cap = settings.clique_cap
    cliques: list[VertexSet] = []
    for clique in nx.find_cliques(g.to_networkx()):
        cliques.append(frozenset(clique))
        if len(cliques) > cap:
            raise CliqueLimitExceeded(cap)
    logger.info("Clique hypergraph: %d maximal cliques", len(cliques))
    return CliqueHypergraph(g.n, tuple(cliques))


def build_structures(
    dist: DiscreteDistribution, eps: Fraction, norm: NormSpec, *, settings: Settings | None = None
) -> ConflictStructures:
    settings = settings or get_settings()
    graph = build_conflict_graph(dist, eps, norm, settings=settings)
    hypergraph = build_conflict_hypergraph(dist, eps, norm, graph=graph, settings=settings)
    cliques = build_clique_hypergraph(graph, settings=settings)
    return ConflictStructures(graph, hypergraph, cliques)
