"""Weighted set packing instances and their certified solutions."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from ..conflict import Hypergraph, VertexSet, maximal_sets
from ..errors import InfeasiblePacking
from ..models import PlainGraph


@dataclass(frozen=True)
class PackingInstance:
    """``max w.q`` subject to ``sum_{i in e} q_i <= 1`` for every constraint ``e``."""

    n: int
    constraints: tuple[VertexSet, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(frozenset(c) for c in self.constraints))
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        if len(self.weights) != self.n:
            raise ValueError(f"{self.n} variables but {len(self.weights)} weights")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be non-negative")
        for constraint in self.constraints:
            if not constraint:
                raise ValueError("constraints must be nonempty")
            if not all(0 <= v < self.n for v in constraint):
                raise ValueError(f"constraint {sorted(constraint)} outside 0..{self.n - 1}")

    @classmethod
    def from_sets(
        cls, n: int, sets: Iterable[Iterable[int]], weights: Sequence[Fraction]
    ) -> PackingInstance:
        return cls(n, maximal_sets(sets), tuple(weights))

    @classmethod
    def from_hypergraph(cls, h: Hypergraph, weights: Sequence[Fraction]) -> PackingInstance:
        return cls(h.n, h.max_edges, tuple(weights))

    @classmethod
    def from_graph(cls, g: PlainGraph, weights: Sequence[Fraction] | None = None) -> PackingInstance:
        """Edge constraints plus singletons for isolated vertices (independent sets)."""

        covered = {v for edge in g.edges for v in edge}
        sets = [frozenset(e) for e in g.sorted_edges()]
        sets += [frozenset((v,)) for v in range(g.n) if v not in covered]
        if weights is None:
            weights = [Fraction(1)] * g.n
        return cls(g.n, tuple(sets), tuple(weights))

    def value(self, q: Sequence[Fraction | int]) -> Fraction:
        return sum((w * Fraction(x) for w, x in zip(self.weights, q)), Fraction(0))

    def violations(self, q: Sequence[Fraction | int]) -> list[VertexSet]:
        return [c for c in self.constraints if sum(Fraction(q[i]) for i in c) > 1]

    def is_feasible(self, q: Sequence[Fraction | int]) -> bool:
        if len(q) != self.n or any(Fraction(x) < 0 or Fraction(x) > 1 for x in q):
            return False
        return not self.violations(q)

    def require_feasible(self, q: Sequence[Fraction | int]) -> None:
        if len(q) != self.n:
            raise InfeasiblePacking(f"packing has {len(q)} entries, expected {self.n}")
        if any(Fraction(x) < 0 or Fraction(x) > 1 for x in q):
            raise InfeasiblePacking("packing entries must lie in [0, 1]")
        broken = self.violations(q)
        if broken:
            shown = sorted(v + 1 for v in broken[0])
            raise InfeasiblePacking(f"packing exceeds 1 on hyperedge {shown}")


@dataclass(frozen=True)
class FractionalSolution:
    """Optimal LP primal and dual with an exact strong-duality certificate.

    ``dual`` is indexed like the instance constraints; ``box_dual`` prices the
    bounds ``q_i <= 1`` and is nonzero only for vertices no constraint covers.
    """

    q: tuple[Fraction, ...]
    value: Fraction
    dual: tuple[Fraction, ...]
    box_dual: tuple[Fraction, ...]
    dual_value: Fraction


@dataclass(frozen=True)
class IntegralSolution:
    q: tuple[int, ...]
    value: Fraction
    proven_optimal: bool
    bound: Fraction
    nodes: int

    @property
    def chosen(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.q) if x)


def verify_fractional(inst: PackingInstance, sol: FractionalSolution) -> list[str]:
    """Return every certificate condition ``sol`` fails (empty when valid)."""

    problems = []
    if not inst.is_feasible(sol.q):
        problems.append("primal infeasible")
    if any(z < 0 for z in sol.dual) or any(z < 0 for z in sol.box_dual):
        problems.append("negative dual entry")
    cover = list(sol.box_dual)
    for z, constraint in zip(sol.dual, inst.constraints):
        for v in constraint:
            cover[v] += z
    if any(c < w for c, w in zip(cover, inst.weights)):
        problems.append("dual infeasible")
    if inst.value(sol.q) != sol.value:
        problems.append("primal value mismatch")
    if sum(sol.dual, Fraction(0)) + sum(sol.box_dual, Fraction(0)) != sol.dual_value:
        problems.append("dual value mismatch")
    if sol.value != sol.dual_value:
        problems.append("duality gap")
    return problems
