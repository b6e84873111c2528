"""Service layer exports."""

from .runs import AnalysisService, load_graph, load_hypergraph, load_packing, random_distribution

__all__ = [
    "AnalysisService",
    "load_graph",
    "load_hypergraph",
    "load_packing",
    "random_distribution",
]
