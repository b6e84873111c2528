"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations

from collections.abc import Iterable
from fractions import Fraction


class AdvGapError(Exception):
    """Base class for every error raised by advgap."""


class DatasetError(AdvGapError, ValueError):
    """Input could not be parsed or violates a distribution invariant."""


class ConstructionError(AdvGapError, ValueError):
    """A generator was called with bad arguments or exceeded a size cap."""


class InfeasiblePacking(AdvGapError, ValueError):
    """A packing vector violates a hyperedge constraint."""


class InvariantViolation(AdvGapError):
    """A certified relation between computed quantities failed to hold."""


class GeometryInconclusive(AdvGapError):
    """The intersection oracle could not separate the radius from epsilon."""

    def __init__(self, vertices: Iterable[int], margin: float) -> None:
        self.vertices = tuple(sorted(vertices))
        self.margin = margin
        shown = ", ".join(str(v + 1) for v in self.vertices)
        super().__init__(
            f"Ball intersection inconclusive for vertices {{{shown}}} "
            f"(radius - eps = {margin:.3e}); perturb eps slightly and rerun"
        )


class SolverBudgetExceeded(AdvGapError):
    """Branch-and-bound ran out of nodes before proving optimality."""

    def __init__(self, incumbent: Fraction, bound: Fraction, nodes: int) -> None:
        self.incumbent = incumbent
        self.bound = bound
        self.nodes = nodes
        super().__init__(
            f"Node budget exhausted after {nodes} nodes: "
            f"best packing {incumbent}, upper bound {bound}"
        )


class CliqueLimitExceeded(AdvGapError):
    """Maximal clique enumeration produced more cliques than allowed."""

    def __init__(self, cap: int) -> None:
        self.cap = cap
        super().__init__(f"More than {cap} maximal cliques; refusing to continue")
