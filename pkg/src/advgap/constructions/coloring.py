"""Proper vertex colorings used as class labels."""

from __future__ import annotations

import networkx as nx

from ..models import PlainGraph


def greedy_coloring(g: PlainGraph) -> tuple[int, ...]:
    """DSATUR coloring with 1-based colors; proper but not necessarily minimal."""

    coloring = nx.coloring.greedy_color(g.to_networkx(), strategy="saturation_largest_first")
    return tuple(coloring[v] + 1 for v in range(g.n))


def color_count(labels: tuple[int, ...]) -> int:
    return len(set(labels))
