"""Exact weighted set packing by LP-bounded branch-and-bound."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from fractions import Fraction

from ..config import Settings, get_settings
from ..conflict import maximal_sets
from .instance import IntegralSolution, PackingInstance
from .simplex import solve_fractional

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _weight_lattice(weights: Iterable[Fraction]) -> Fraction:
    """Largest ``g`` with every weight an integer multiple of ``g`` (0 if all weights are 0)."""

    weights = [w for w in weights if w]
    if not weights:
        return Fraction(0)
    scale = math.lcm(*(w.denominator for w in weights))
    return Fraction(math.gcd(*(int(w * scale) for w in weights)), scale)


class _BranchAndBound:
    def __init__(self, inst: PackingInstance, budget: int) -> None:
        self.inst = inst
        self.budget = budget
        self.weights = inst.weights
        self.neighbours: list[set[int]] = [set() for _ in range(inst.n)]
        for constraint in inst.constraints:
            for v in constraint:
                self.neighbours[v] |= constraint
        for v in range(inst.n):
            self.neighbours[v].discard(v)
        self.lattice = _weight_lattice(inst.weights)
        self.best, self.best_value = self._greedy()
        self.nodes = 0

    def _greedy(self) -> tuple[frozenset[int], Fraction]:
        chosen: set[int] = set()
        for v in sorted(range(self.inst.n), key=lambda i: (-self.weights[i], i)):
            if not self.neighbours[v] & chosen:
                chosen.add(v)
        return frozenset(chosen), self._weight(chosen)

    def _weight(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.weights[v] for v in vertices), Fraction(0))

    def _floor(self, value: Fraction) -> Fraction:
        if not self.lattice:
            return value
        return math.floor(value / self.lattice) * self.lattice

    def _offer(self, chosen: frozenset[int], value: Fraction) -> None:
        if value > self.best_value:
            logger.debug("branch-and-bound: incumbent %s after %d nodes", value, self.nodes)
            self.best, self.best_value = chosen, value

    def _branch_variable(self, local: list[int], q: tuple[Fraction, ...]) -> int:
        candidates = [j for j, x in enumerate(q) if 0 < x < 1]
        j = min(candidates, key=lambda j: (abs(q[j] - HALF), -self.weights[local[j]], local[j]))
        return local[j]

    def run(self) -> IntegralSolution:
        stack: list[tuple[frozenset[int], frozenset[int], Fraction | None]] = [
            (frozenset(range(self.inst.n)), frozenset(), None)
        ]
        exhausted = False
        while stack:
            residual, chosen, parent_bound = stack.pop()
            if parent_bound is not None and parent_bound <= self.best_value:
                continue
            if self.nodes >= self.budget:
                stack.append((residual, chosen, parent_bound))
                exhausted = True
                break
            self.nodes += 1

            loose = frozenset(v for v in residual if not self.neighbours[v] & residual)
            chosen, residual = chosen | loose, residual - loose
            base = self._weight(chosen)
            if not residual:
                self._offer(chosen, base)
                continue
            if self._floor(base + self._weight(residual)) <= self.best_value:
                continue

            local = sorted(residual)
            index = {v: j for j, v in enumerate(local)}
            sub = PackingInstance(
                len(local),
                maximal_sets(
                    [index[v] for v in c & residual]
                    for c in self.inst.constraints if len(c & residual) > 1
                ),
                tuple(self.weights[v] for v in local),
            )
            relaxed = solve_fractional(sub)
            bound = self._floor(base + relaxed.value)
            if bound <= self.best_value:
                continue
            if all(x in (0, 1) for x in relaxed.q):
                picked = frozenset(v for v, x in zip(local, relaxed.q) if x == 1)
                self._offer(chosen | picked, base + relaxed.value)
                continue

            v = self._branch_variable(local, relaxed.q)
            stack.append((residual - {v}, chosen, bound))
            stack.append((residual - {v} - self.neighbours[v], chosen | {v}, bound))

        if exhausted:
            total = self._weight(range(self.inst.n))
            open_bound = max(
                (total if b is None else b for _, _, b in stack), default=self.best_value
            )
            bound = max(open_bound, self.best_value)
        else:
            bound = self.best_value
        q = tuple(1 if v in self.best else 0 for v in range(self.inst.n))
        logger.debug(
            "branch-and-bound: value %s, %d nodes, proven=%s", self.best_value, self.nodes,
            not exhausted,
        )
        return IntegralSolution(q, self.best_value, not exhausted, bound, self.nodes)


def solve_integral(
    inst: PackingInstance, *, node_budget: int | None = None, settings: Settings | None = None
) -> IntegralSolution:
    """Maximum weight packing; ``proven_optimal`` is False when the node budget ran out."""

    settings = settings or get_settings()
    budget = settings.node_budget if node_budget is None else node_budget
    return _BranchAndBound(inst, budget).run()
