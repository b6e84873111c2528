"""Core domain types: exact rationals, norms, labeled points, distributions, graphs."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import TypeAlias

import networkx as nx

from .errors import ConstructionError, DatasetError

Rational: TypeAlias = Fraction
Point: TypeAlias = tuple[Fraction, ...]
Edge: TypeAlias = tuple[int, int]

MAX_DECIMAL_EXPONENT = 400


def _from_decimal(number: Decimal, value: object) -> Fraction:
    if not number.is_finite():
        raise DatasetError(f"Non-finite rational literal {value!r}")
    exponent = number.as_tuple().exponent
    if isinstance(exponent, int) and abs(exponent) > MAX_DECIMAL_EXPONENT:
        raise DatasetError(f"Exponent out of range in {value!r}")
    return Fraction(number)


def parse_rational(value: object) -> Fraction:
    """Parse ``"a/b"``, integer or decimal literals into an exact rational.

    Floats go through their shortest decimal repr, so ``0.9`` becomes ``9/10``.
    """

    if isinstance(value, bool):
        raise DatasetError(f"Expected a rational, got boolean {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, Decimal):
        return _from_decimal(value, value)
    if not isinstance(value, str):
        raise DatasetError(f"Expected a rational, got {type(value).__name__}")
    text = value.strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            if int(den) == 0:
                raise DatasetError(f"Zero denominator in {value!r}")
            return Fraction(int(num), int(den))
        return _from_decimal(Decimal(text), value)
    except DatasetError:
        raise
    except (ValueError, InvalidOperation) as exc:
        raise DatasetError(f"Invalid rational literal {value!r}") from exc


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


@dataclass(frozen=True)
class NormSpec:
    """An l_p norm with rational p > 1, or the l_infinity norm when ``p`` is None."""

    p: Fraction | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            object.__setattr__(self, "p", Fraction(self.p))
            if self.p <= 1:
                raise DatasetError(f"Norm exponent must satisfy p > 1, got {self.p}")

    @classmethod
    def infinity(cls) -> NormSpec:
        return cls(None)

    @classmethod
    def parse(cls, text: str | int | Fraction) -> NormSpec:
        if isinstance(text, str) and text.strip().lower() in {"inf", "infinity", "∞"}:
            return cls.infinity()
        return cls(parse_rational(text))

    @property
    def is_infinity(self) -> bool:
        return self.p is None

    @property
    def integer_p(self) -> int | None:
        """The exponent as an int when it is a positive integer, else None."""
        if self.p is not None and self.p.denominator == 1:
            return self.p.numerator
        return None

    @property
    def float_p(self) -> float:
        return float("inf") if self.p is None else float(self.p)

    def __str__(self) -> str:
        return "inf" if self.p is None else format_rational(self.p)


@dataclass(frozen=True)
class LabeledPoint:
    coords: Point
    label: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class DiscreteDistribution:
    """A finitely supported labeled distribution with exact rational weights.

    Labels are 1-based class indices in ``[1, num_classes]``.
    """

    support: tuple[LabeledPoint, ...]
    weights: tuple[Fraction, ...]
    num_classes: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if not self.support:
            raise DatasetError("empty support")
        if len(self.weights) != len(self.support):
            raise DatasetError(
                f"{len(self.support)} support points but {len(self.weights)} weights"
            )
        dim = self.support[0].dim
        for index, point in enumerate(self.support):
            if point.dim != dim:
                raise DatasetError(
                    f"dimension mismatch: point {index + 1} has {point.dim} coordinates, "
                    f"expected {dim}"
                )
            if not 1 <= point.label <= self.num_classes:
                raise DatasetError(
                    f"label {point.label} of point {index + 1} outside [1, {self.num_classes}]"
                )
        for index, weight in enumerate(self.weights):
            if weight <= 0:
                raise DatasetError(f"weight of point {index + 1} must be positive, got {weight}")
        total = sum(self.weights, Fraction(0))
        if total != 1:
            raise DatasetError(f"weights sum to {total} ≠ 1")
        if len(set(self.support)) != len(self.support):
            raise DatasetError("duplicate (coords, label) pairs in support")

    @classmethod
    def uniform(
        cls,
        points: Iterable[Sequence[Fraction | int]],
        labels: Iterable[int],
        num_classes: int | None = None,
    ) -> DiscreteDistribution:
        support = tuple(
            LabeledPoint(tuple(Fraction(c) for c in coords), label)
            for coords, label in zip(points, labels, strict=True)
        )
        if not support:
            raise DatasetError("empty support")
        weight = Fraction(1, len(support))
        k = num_classes if num_classes is not None else max(p.label for p in support)
        return cls(support, tuple(weight for _ in support), k)

    @property
    def n(self) -> int:
        return len(self.support)

    @property
    def dim(self) -> int:
        return self.support[0].dim

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(p.label for p in self.support)

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(p.coords for p in self.support)


@dataclass(frozen=True, eq=False)
class PlainGraph:
    """Simple undirected graph on vertices ``0..n-1``; edges stored as sorted pairs.

    Equality compares vertex count and edge set, so a conflict graph equals the
    plain graph it realizes.
    """

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ConstructionError("vertex count must be non-negative")
        canonical = set()
        for u, v in self.edges:
            if u == v:
                raise ConstructionError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ConstructionError(f"edge ({u}, {v}) outside 0..{self.n - 1}")
            canonical.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(canonical))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlainGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> PlainGraph:
        nodes = sorted(graph.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls(len(nodes), frozenset((index[u], index[v]) for u, v in graph.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def complement(self) -> PlainGraph:
        return PlainGraph.from_networkx(nx.complement(self.to_networkx()))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def is_triangle_free(self) -> bool:
        return sum(nx.triangles(self.to_networkx()).values()) == 0
