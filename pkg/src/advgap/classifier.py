"""Randomized classifiers built from fractional packings, and their witnessed accuracy.

A packing ``q`` induces the rule: at query ``x`` take, for every class ``y``,
the largest ``q_i`` among support points of class ``y`` whose eps-ball
contains ``x``; class 1 receives the remaining mass. Attacks are evaluated on
the hyperedge witnesses recorded while building the conflict hypergraph.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .config import Settings, get_settings
from .conflict import ConflictHypergraph, build_conflict_hypergraph
from .errors import InvariantViolation
from .geometry import ball_contains
from .models import DiscreteDistribution, NormSpec
from .packing import PackingInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RandomizedClassifier:
    distribution: DiscreteDistribution
    eps: Fraction
    norm: NormSpec
    q: tuple[Fraction, ...]
    tol: float

    def neighbours(self, x: Sequence[Any]) -> list[int]:
        return [
            i for i, point in enumerate(self.distribution.support)
            if ball_contains(point, x, self.eps, self.norm, self.tol)
        ]

    def __call__(self, x: Sequence[Any]) -> tuple[Fraction, ...]:
        k = self.distribution.num_classes
        best = [Fraction(0)] * (k + 1)
        for i in self.neighbours(x):
            label = self.distribution.support[i].label
            best[label] = max(best[label], self.q[i])
        rest = sum(best[2:], Fraction(0))
        if rest > 1:
            raise InvariantViolation(f"class masses exceed 1 at query {tuple(x)}")
        return (1 - rest, *best[2:])

    @property
    def deterministic(self) -> bool:
        return all(v in (0, 1) for v in self.q)


@dataclass(frozen=True)
class AttackSet:
    """Adversarial query points: every support point plus one witness per maximal hyperedge."""

    hypergraph: ConflictHypergraph
    witnesses: Mapping[frozenset[int], tuple[Any, ...]]
    extra: Mapping[int, tuple[tuple[Any, ...], ...]] = field(default_factory=dict)

    @classmethod
    def from_hypergraph(cls, h: ConflictHypergraph) -> AttackSet:
        return cls(h, dict(h.witnesses))

    def with_points(self, index: int, points: Sequence[Sequence[Any]]) -> AttackSet:
        extra = dict(self.extra)
        extra[index] = tuple(extra.get(index, ())) + tuple(tuple(p) for p in points)
        return AttackSet(self.hypergraph, self.witnesses, extra)

    def points_for(self, dist: DiscreteDistribution, index: int) -> list[tuple[Any, ...]]:
        points = [dist.support[index].coords]
        points += [w for e, w in self.witnesses.items() if index in e]
        points += list(self.extra.get(index, ()))
        return points


def classifier_from_packing(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    q: Sequence[Fraction | int],
    *,
    hypergraph: ConflictHypergraph | None = None,
    settings: Settings | None = None,
) -> RandomizedClassifier:
    settings = settings or get_settings()
    h = hypergraph or build_conflict_hypergraph(dist, eps, norm, settings=settings)
    packing = tuple(Fraction(v) for v in q)
    PackingInstance.from_hypergraph(h, dist.weights).require_feasible(packing)
    return RandomizedClassifier(dist, Fraction(eps), norm, packing, settings.tol)


def packing_from_classifier(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    f: RandomizedClassifier,
    attacks: AttackSet,
) -> tuple[Fraction, ...]:
    """Worst class-``y_i`` probability over the attack points of each support point."""

    if f.distribution != dist or f.eps != Fraction(eps) or f.norm != norm:
        raise ValueError("classifier was built for a different distribution, radius or norm")
    estimate = []
    for i, point in enumerate(dist.support):
        estimate.append(min(f(x)[point.label - 1] for x in attacks.points_for(dist, i)))
    inst = PackingInstance.from_hypergraph(attacks.hypergraph, dist.weights)
    if not inst.is_feasible(estimate):
        raise InvariantViolation("witnessed packing is not feasible for the conflict hypergraph")
    return tuple(estimate)


def witnessed_adversarial_accuracy(
    dist: DiscreteDistribution,
    eps: Fraction,
    norm: NormSpec,
    f: RandomizedClassifier,
    attacks: AttackSet,
) -> Fraction:
    estimate = packing_from_classifier(dist, eps, norm, f, attacks)
    accuracy = sum((w * v for w, v in zip(dist.weights, estimate)), Fraction(0))
    logger.info("Witnessed adversarial accuracy: %s", accuracy)
    return accuracy
