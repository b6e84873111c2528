"""Exact fractional set packing by an integer-preserving simplex with Bland's rule.

The tableau holds integers only. After a pivot on entry ``P`` every entry is
updated as ``(t * P - t_col * t_row) / D`` where ``D`` is the previous pivot;
the division is always exact, so no rational normalization happens inside the
loop. Values are read back as fractions over the current ``D``.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm

from ..errors import InvariantViolation
from .instance import FractionalSolution, PackingInstance, verify_fractional

logger = logging.getLogger(__name__)


class _Tableau:
    """``max c.x`` s.t. ``A x <= 1``, ``x >= 0`` for a 0/1 matrix ``A`` and integer ``c``."""

    def __init__(self, rows: list[list[int]], costs: list[int]) -> None:
        self.m = len(rows)
        self.cols = len(costs)
        total = self.cols + self.m
        self.rhs = total
        self.table: list[list[int]] = []
        for r, members in enumerate(rows):
            line = [0] * (total + 1)
            for j in members:
                line[j] = 1
            line[self.cols + r] = 1
            line[total] = 1
            self.table.append(line)
        self.objective = [-c for c in costs] + [0] * self.m + [0]
        self.basis = [self.cols + r for r in range(self.m)]
        self.denominator = 1
        self.pivots = 0

    def _entering(self) -> int | None:
        return next((j for j in range(self.rhs) if self.objective[j] < 0), None)

    def _leaving(self, col: int) -> int | None:
        best: int | None = None
        for r, line in enumerate(self.table):
            a = line[col]
            if a <= 0:
                continue
            if best is None:
                best = r
                continue
            lhs = line[self.rhs] * self.table[best][col]
            rhs = self.table[best][self.rhs] * a
            if lhs < rhs or (lhs == rhs and self.basis[r] < self.basis[best]):
                best = r
        return best

    def _pivot(self, row: int, col: int) -> None:
        pivot_line = self.table[row]
        p = pivot_line[col]
        d = self.denominator
        for r, line in enumerate(self.table):
            if r == row:
                continue
            self.table[r] = _eliminate(line, pivot_line, p, col, d)
        self.objective = _eliminate(self.objective, pivot_line, p, col, d)
        self.basis[row] = col
        self.denominator = p
        self.pivots += 1

    def run(self) -> None:
        while (col := self._entering()) is not None:
            row = self._leaving(col)
            if row is None:  # pragma: no cover - packing LPs are bounded
                raise InvariantViolation("packing LP reported unbounded")
            self._pivot(row, col)
        logger.debug("simplex: %d rows, %d pivots", self.m, self.pivots)

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.cols
        for r, var in enumerate(self.basis):
            if var < self.cols:
                x[var] = Fraction(self.table[r][self.rhs], self.denominator)
        return x

    def dual(self) -> list[Fraction]:
        return [Fraction(self.objective[self.cols + r], self.denominator) for r in range(self.m)]

    def value(self) -> Fraction:
        return Fraction(self.objective[self.rhs], self.denominator)


def _eliminate(line: list[int], pivot_line: list[int], p: int, col: int, d: int) -> list[int]:
    factor = line[col]
    if factor == 0:
        return [v * p // d for v in line]
    return [(v * p - factor * w) // d for v, w in zip(line, pivot_line)]


def solve_fractional(inst: PackingInstance) -> FractionalSolution:
    """Optimal fractional packing with its dual cover, both exact."""

    in_big = [False] * inst.n
    for constraint in inst.constraints:
        if len(constraint) > 1:
            for v in constraint:
                in_big[v] = True
    free = [v for v in range(inst.n) if in_big[v]]
    column = {v: j for j, v in enumerate(free)}
    big_rows = [r for r, c in enumerate(inst.constraints) if len(c) > 1]

    q = [Fraction(0)] * inst.n
    dual = [Fraction(0)] * len(inst.constraints)
    box_dual = [Fraction(0)] * inst.n

    # Vertices outside every multi-vertex constraint sit at 1, priced by a singleton or the box.
    for v in range(inst.n):
        if not in_big[v]:
            q[v] = Fraction(1)
    priced = set()
    for r, constraint in enumerate(inst.constraints):
        if len(constraint) == 1:
            (v,) = constraint
            if not in_big[v] and v not in priced:
                dual[r] = inst.weights[v]
                priced.add(v)
    for v in range(inst.n):
        if not in_big[v] and v not in priced:
            box_dual[v] = inst.weights[v]

    if free:
        scale = lcm(*(inst.weights[v].denominator for v in free))
        costs = [int(inst.weights[v] * scale) for v in free]
        rows = [[column[v] for v in sorted(inst.constraints[r])] for r in big_rows]
        tableau = _Tableau(rows, costs)
        tableau.run()
        for v, x in zip(free, tableau.primal()):
            q[v] = x
        for r, z in zip(big_rows, tableau.dual()):
            dual[r] = z / scale

    value = inst.value(q)
    dual_value = sum(dual, Fraction(0)) + sum(box_dual, Fraction(0))
    solution = FractionalSolution(tuple(q), value, tuple(dual), tuple(box_dual), dual_value)
    problems = verify_fractional(inst, solution)
    if problems:
        raise InvariantViolation(f"fractional packing certificate failed: {', '.join(problems)}")
    return solution
