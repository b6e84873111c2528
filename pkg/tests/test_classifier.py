from fractions import Fraction

import pytest

from advgap.classifier import (
    AttackSet,
    classifier_from_packing,
    packing_from_classifier,
    witnessed_adversarial_accuracy,
)
from advgap.conflict import build_conflict_hypergraph
from advgap.constructions import canonical_basis_distribution
from advgap.errors import InfeasiblePacking
from advgap.packing import optimal_packings
from advgap.services import random_distribution

from .conftest import L2, LINF

HALF = Fraction(1, 2)


def test_half_packing_on_pentagon_is_witnessed_exactly(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    f = classifier_from_packing(dist, eps, norm, [HALF] * 5)
    assert not f.deterministic
    attacks = AttackSet.from_hypergraph(build_conflict_hypergraph(dist, eps, norm))
    assert packing_from_classifier(dist, eps, norm, f, attacks) == (HALF,) * 5
    assert witnessed_adversarial_accuracy(dist, eps, norm, f, attacks) == HALF


def test_integral_packing_gives_deterministic_classifier(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    _, integral = optimal_packings(dist, eps, norm)
    f = classifier_from_packing(dist, eps, norm, integral.q)
    assert f.deterministic
    attacks = AttackSet.from_hypergraph(build_conflict_hypergraph(dist, eps, norm))
    assert witnessed_adversarial_accuracy(dist, eps, norm, f, attacks) == Fraction(2, 5)


def test_classifier_output_is_a_distribution_over_classes(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    f = classifier_from_packing(dist, eps, norm, [HALF, HALF, 0, HALF, 0])
    midpoint = tuple((a + b) / 2 for a, b in zip(dist.points[0], dist.points[1]))
    probabilities = f(midpoint)
    assert len(probabilities) == 5
    assert sum(probabilities) == 1
    assert probabilities[1] == HALF
    assert f.neighbours(midpoint) == [0, 1]


def test_far_away_query_goes_to_class_one(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    f = classifier_from_packing(dist, eps, norm, [HALF] * 5)
    assert f((Fraction(10), Fraction(10))) == (1, 0, 0, 0, 0)


def test_infeasible_packing_is_rejected(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    with pytest.raises(InfeasiblePacking):
        classifier_from_packing(dist, eps, norm, [1] * 5)


def test_witnessed_packing_never_exceeds_the_input(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    q = [Fraction(1, 3), Fraction(2, 3), Fraction(1, 3), Fraction(1, 3), Fraction(1, 2)]
    f = classifier_from_packing(dist, eps, norm, q)
    attacks = AttackSet.from_hypergraph(build_conflict_hypergraph(dist, eps, norm))
    witnessed = packing_from_classifier(dist, eps, norm, f, attacks)
    assert all(w <= x for w, x in zip(witnessed, q))


def test_extra_attack_points_are_used(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    h = build_conflict_hypergraph(dist, eps, norm)
    attacks = AttackSet.from_hypergraph(h)
    extended = attacks.with_points(0, [dist.points[0]])
    assert len(extended.points_for(dist, 0)) == len(attacks.points_for(dist, 0)) + 1
    assert len(attacks.points_for(dist, 0)) == 3


def test_mismatched_classifier_is_rejected(pentagon):
    dist, eps, norm = pentagon.distribution, pentagon.epsilon, pentagon.norm
    f = classifier_from_packing(dist, eps, norm, [HALF] * 5)
    attacks = AttackSet.from_hypergraph(build_conflict_hypergraph(dist, eps, norm))
    with pytest.raises(ValueError):
        packing_from_classifier(dist, Fraction(1, 3), norm, f, attacks)


def test_basis_half_packing_is_witnessed_on_pairs():
    dist = canonical_basis_distribution(3)
    eps = Fraction(7, 9)
    f = classifier_from_packing(dist, eps, L2, [HALF] * 3)
    attacks = AttackSet.from_hypergraph(build_conflict_hypergraph(dist, eps, L2))
    assert witnessed_adversarial_accuracy(dist, eps, L2, f, attacks) == HALF


def test_triangle_pendant_optimal_packing_is_witnessed_exactly(triangle_pendant):
    dist, eps, norm = triangle_pendant.distribution, triangle_pendant.epsilon, triangle_pendant.norm
    h = build_conflict_hypergraph(dist, eps, norm)
    fractional, integral = optimal_packings(dist, eps, norm, hypergraph=h)
    attacks = AttackSet.from_hypergraph(h)
    for q, value in ((fractional.q, fractional.value), (integral.q, integral.value)):
        f = classifier_from_packing(dist, eps, norm, q, hypergraph=h)
        assert witnessed_adversarial_accuracy(dist, eps, norm, f, attacks) == value == HALF


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("norm", [L2, LINF], ids=["l2", "linf"])
def test_witnessed_accuracy_is_sandwiched_by_the_packings(seed, norm):
    dist = random_distribution(8, 3, 2, seed)
    eps = Fraction(3, 10)
    h = build_conflict_hypergraph(dist, eps, norm)
    fractional, integral = optimal_packings(dist, eps, norm, hypergraph=h)
    attacks = AttackSet.from_hypergraph(h)
    for q, value in ((integral.q, integral.value), (fractional.q, fractional.value)):
        f = classifier_from_packing(dist, eps, norm, q, hypergraph=h)
        accuracy = witnessed_adversarial_accuracy(dist, eps, norm, f, attacks)
        assert value <= accuracy <= fractional.value
