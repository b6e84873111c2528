"""Small reference datasets and named graphs used in docs, tests and ``construct``."""

from __future__ import annotations

import math
import re
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from ..errors import ConstructionError
from ..models import DiscreteDistribution, NormSpec, PlainGraph

L2 = NormSpec(Fraction(2))


@dataclass(frozen=True)
class FigureDataset:
    name: str
    distribution: DiscreteDistribution
    epsilon: Fraction
    norm: NormSpec


def pentagon_distribution() -> DiscreteDistribution:
    """Regular pentagon on the unit circle, five classes; at eps = 3/4 the conflicts form C5."""

    points = []
    for k in range(5):
        angle = math.radians(90 + 72 * k)
        points.append(
            (
                Fraction(math.cos(angle)).limit_denominator(10**6),
                Fraction(math.sin(angle)).limit_denominator(10**6),
            )
        )
    return DiscreteDistribution.uniform(points, range(1, 6))


def triangle_pendant_distribution() -> DiscreteDistribution:
    """Three mutually conflicting points plus one conflicting only with the third."""

    points = [
        (Fraction(0), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (Fraction(1, 2), Fraction(7, 8)),
        (Fraction(1, 2), Fraction(91, 40)),
    ]
    return DiscreteDistribution.uniform(points, range(1, 5))


ANTIHOLE_POINTS = (
    ("0", ".2", ".3", ".4", ".5", ".6", "1"),
    ("1", "0", ".3", ".4", ".5", ".6", ".7"),
    (".1", "1", "0", ".4", ".5", ".6", ".7"),
    (".1", ".2", "1", "0", ".5", ".6", ".7"),
    (".1", ".2", ".3", "1", "0", ".6", ".7"),
    (".1", ".2", ".3", ".4", "1", "0", ".7"),
    (".1", ".2", ".3", ".4", ".5", "1", "0"),
)


def antihole_distribution() -> DiscreteDistribution:
    """Seven l_inf points whose conflict graph at eps = 49/100 is the complement of C7."""

    points = [tuple(Fraction(c) for c in row) for row in ANTIHOLE_POINTS]
    return DiscreteDistribution.uniform(points, range(1, 8))


FIGURES: dict[str, Callable[[], FigureDataset]] = {
    "pentagon": lambda: FigureDataset("pentagon", pentagon_distribution(), Fraction(3, 4), L2),
    "triangle-pendant": lambda: FigureDataset(
        "triangle-pendant", triangle_pendant_distribution(), Fraction(3, 4), L2
    ),
    "antihole": lambda: FigureDataset(
        "antihole", antihole_distribution(), Fraction(49, 100), NormSpec.infinity()
    ),
}


def figure(name: str) -> FigureDataset:
    try:
        return FIGURES[name]()
    except KeyError:
        raise ConstructionError(
            f"unknown figure {name!r}; choose one of {', '.join(sorted(FIGURES))}"
        ) from None


_SIZED = re.compile(r"^(path|cycle|complete|empty)(\d+)$")


def named_graph(name: str) -> PlainGraph:
    """``c3``, ``c5``, ``c7``, ``c7complement`` or ``path<n>``, ``cycle<n>``, ``complete<n>``, ``empty<n>``."""

    key = name.strip().lower()
    if key in {"c3", "c5", "c7"}:
        return PlainGraph.from_networkx(nx.cycle_graph(int(key[1:])))
    if key == "c7complement":
        return PlainGraph.from_networkx(nx.complement(nx.cycle_graph(7)))
    match = _SIZED.match(key)
    if match is None:
        raise ConstructionError(f"unknown graph {name!r}")
    kind, size = match.group(1), int(match.group(2))
    if kind == "cycle" and size < 3:
        raise ConstructionError("cycles need at least 3 vertices")
    builders = {
        "path": nx.path_graph,
        "cycle": nx.cycle_graph,
        "complete": nx.complete_graph,
        "empty": nx.empty_graph,
    }
    return PlainGraph.from_networkx(builders[kind](size))
