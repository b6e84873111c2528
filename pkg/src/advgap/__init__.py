"""advgap: conflict hypergraphs, adversarial risks and the randomization gap."""

from .analysis import check_perfect, decompose_gap
from .conflict import build_conflict_graph, build_conflict_hypergraph, build_structures
from .models import DiscreteDistribution, NormSpec, PlainGraph
from .packing import (
    deterministic_adversarial_risk,
    randomization_gap,
    randomized_adversarial_risk,
)

__version__ = "0.1.0"

__all__ = [
    "DiscreteDistribution",
    "NormSpec",
    "PlainGraph",
    "__version__",
    "build_conflict_graph",
    "build_conflict_hypergraph",
    "build_structures",
    "check_perfect",
    "decompose_gap",
    "deterministic_adversarial_risk",
    "randomization_gap",
    "randomized_adversarial_risk",
]
