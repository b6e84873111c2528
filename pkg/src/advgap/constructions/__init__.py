"""Generators for distributions and graphs with known conflict structure."""

from .basis import BASIS_EPSILON, canonical_basis_distribution
from .coloring import color_count, greedy_coloring
from .embeddings import embed_linf, embed_lp, graph_to_distribution
from .fibration import (
    fibrate,
    fibration_depth_for,
    fibration_distribution,
    fibration_gap_lower_bound,
    independence_number,
    iterate_fibration,
)
from .figures import (
    FigureDataset,
    antihole_distribution,
    figure,
    named_graph,
    pentagon_distribution,
    triangle_pendant_distribution,
)

__all__ = [
    "BASIS_EPSILON",
    "FigureDataset",
    "antihole_distribution",
    "canonical_basis_distribution",
    "color_count",
    "embed_linf",
    "embed_lp",
    "fibrate",
    "fibration_depth_for",
    "fibration_distribution",
    "fibration_gap_lower_bound",
    "figure",
    "graph_to_distribution",
    "greedy_coloring",
    "independence_number",
    "iterate_fibration",
    "named_graph",
    "pentagon_distribution",
    "triangle_pendant_distribution",
]
