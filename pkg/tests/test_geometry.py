import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from advgap.geometry import (
    IntersectionStatus,
    ball_contains,
    balls_intersect,
    basis_intersection_threshold,
    chebyshev_center,
    lp_distance,
    pairwise_conflict,
)
from advgap.constructions import figure
from advgap.models import NormSpec

L2 = NormSpec(Fraction(2))
L3 = NormSpec(Fraction(3))
L32 = NormSpec(Fraction(3, 2))
LINF = NormSpec.infinity()


def basis(m: int) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m)]


def test_pairwise_conflict_is_inclusive_at_the_boundary():
    a, b = (Fraction(0), Fraction(0)), (Fraction(3), Fraction(4))
    assert pairwise_conflict(a, b, Fraction(5, 2), L2)
    assert not pairwise_conflict(a, b, Fraction(5, 2) - Fraction(1, 10**12), L2)
    assert pairwise_conflict(a, b, 2, LINF)
    assert not pairwise_conflict(a, b, Fraction(199, 100), LINF)


def test_pairwise_conflict_general_exponent_uses_tolerance():
    a, b = (0, 0), (1, 1)
    # ||(1, 1)||_{3/2} = 2^{2/3}
    radius = Fraction(2 ** (2 / 3) / 2)
    norm = NormSpec(Fraction(3, 2))
    assert pairwise_conflict(a, b, radius + Fraction(1, 10**6), norm)
    assert not pairwise_conflict(a, b, radius - Fraction(1, 10**6), norm)


def test_ball_contains_matches_distance():
    assert ball_contains((0, 0), (Fraction(3, 5), Fraction(4, 5)), 1, L2)
    assert not ball_contains((0, 0), (Fraction(3, 5), Fraction(5, 5)), 1, L2)
    assert ball_contains((0, 0), (1, -1), 1, LINF)
    assert lp_distance((0, 0), (3, 4), L2) == pytest.approx(5.0)


def test_linf_center_is_box_midpoint():
    center = chebyshev_center([(0, 0), (2, 1), (1, 4)], LINF)
    assert center.center == (Fraction(1), Fraction(2))
    assert center.exact == Fraction(2)
    assert center.certified


def test_l2_center_of_right_triangle_is_hypotenuse_midpoint():
    center = chebyshev_center([(0, 0), (2, 0), (0, 2)], L2)
    assert center.center == (Fraction(1), Fraction(1))
    assert center.exact == Fraction(2)
    assert center.radius == pytest.approx(math.sqrt(2))


def test_l2_center_ignores_interior_points():
    points = [(0, 0), (4, 0), (2, 1), (2, Fraction(1, 2)), (1, 0)]
    center = chebyshev_center(points, L2)
    assert center.center == (Fraction(2), Fraction(0))
    assert center.exact == Fraction(4)


def test_l2_center_of_basis_is_centroid():
    center = chebyshev_center(basis(4), L2)
    assert center.center == (Fraction(1, 4),) * 4
    assert center.exact == Fraction(3, 4)


def test_single_point_center_has_zero_radius():
    center = chebyshev_center([(1, 2)], L3)
    assert center.radius == 0.0
    assert center.fits(Fraction(0))


def test_two_points_integer_exponent_is_exact():
    center = chebyshev_center([(0, 0), (2, 0)], L3)
    assert center.center == (Fraction(1), Fraction(0))
    assert center.exact == Fraction(1) and center.exact_power == 3


def test_basis_triple_does_not_intersect_at_stand_in_radius():
    verdict = balls_intersect(basis(3), Fraction(7, 9), L2)
    assert verdict.status is IntersectionStatus.empty
    assert verdict.witness is None
    assert verdict.margin > 0


def test_basis_pair_intersects_with_midpoint_witness():
    verdict = balls_intersect(basis(3)[:2], Fraction(7, 9), L2)
    assert verdict.nonempty
    assert verdict.witness == (Fraction(1, 2), Fraction(1, 2), Fraction(0))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_bisection_recovers_basis_threshold(m):
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(40):
        mid = (lo + hi) / 2
        if balls_intersect(basis(m), mid, L2).nonempty:
            hi = mid
        else:
            lo = mid
    assert float(hi) == pytest.approx(basis_intersection_threshold(m), abs=1e-9)


def test_basis_threshold_closed_form():
    assert basis_intersection_threshold(1) == 0.0
    assert basis_intersection_threshold(3) == pytest.approx(math.sqrt(2 / 3))
    with pytest.raises(ValueError):
        basis_intersection_threshold(0)


def test_general_exponent_decides_clear_cases():
    triangle = [(0, 0), (1, 0), (0, 1)]
    assert balls_intersect(triangle, Fraction(1), L3).status is IntersectionStatus.nonempty
    assert balls_intersect(triangle, Fraction(1, 4), L3).status is IntersectionStatus.empty


def test_general_exponent_witness_lies_in_every_ball():
    triangle = [(0, 0), (1, 0), (0, 1)]
    verdict = balls_intersect(triangle, Fraction(9, 10), L3)
    assert verdict.nonempty
    for point in triangle:
        assert lp_distance(point, verdict.witness, L3) <= 0.9 + 1e-9


def test_general_exponent_radius_is_bracketed():
    triangle = [(0, 0), (1, 0), (0, 1)]
    center = chebyshev_center(triangle, L3, 1e-6)
    assert center.lower_bound <= center.radius
    # the l_3 radius sits between the l_inf and l_2 radii
    assert 0.5 - 1e-9 <= center.radius <= math.sqrt(2) / 2 + 1e-9



def _grid_radius(points, norm: NormSpec, steps: int = 201, rounds: int = 3) -> float:
    """Best max-distance over nested grids; always an upper bound on the true radius."""

    pts = np.array([[float(c) for c in p] for p in points])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    best = math.inf
    for _ in range(rounds):
        axes = [np.linspace(a, b, steps) for a, b in zip(lo, hi)]
        grid = np.stack([g.ravel() for g in np.meshgrid(*axes)], axis=1)
        dist = np.linalg.norm(grid[:, None, :] - pts[None, :, :], ord=norm.float_p, axis=2)
        worst = dist.max(axis=1)
        k = int(worst.argmin())
        best = min(best, float(worst[k]))
        span = 2 * (hi - lo) / (steps - 1)
        lo, hi = grid[k] - span, grid[k] + span
    return best


def _random_points(rng: random.Random, count: int) -> list[tuple[Fraction, Fraction]]:
    points: set[tuple[Fraction, Fraction]] = set()
    while len(points) < count:
        points.add((Fraction(rng.randint(0, 10), 10), Fraction(rng.randint(0, 10), 10)))
    return sorted(points)


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("norm", [L2, L3, L32], ids=["l2", "l3", "l3/2"])
def test_center_agrees_with_grid_search(seed, norm):
    rng = random.Random(seed)
    points = _random_points(rng, rng.randint(2, 4))
    center = chebyshev_center(points, norm)
    reference = _grid_radius(points, norm)
    assert center.lower_bound <= center.radius
    assert center.certified
    assert center.radius - center.lower_bound <= 1e-9
    assert center.radius <= reference + 1e-9
    assert reference - center.radius <= 1e-4
    for point in points:
        assert lp_distance(point, center.center, norm) <= center.radius + 1e-9


def test_general_exponent_separated_triple_is_certified_empty():
    triple = [
        (Fraction(1, 5), Fraction(3, 5)),
        (Fraction(3, 5), Fraction(1)),
        (Fraction(4, 5), Fraction(3, 10)),
    ]
    center = chebyshev_center(triple, L32)
    assert center.certified
    assert center.radius == pytest.approx(0.4003221, abs=1e-6)
    verdict = balls_intersect(triple, Fraction(2, 5), L32)
    assert verdict.status is IntersectionStatus.empty


@pytest.mark.parametrize("norm", [L3, L32], ids=["l3", "l3/2"])
def test_warm_start_does_not_change_the_radius(norm):
    points = [(0, 0), (1, 0), (Fraction(1, 5), Fraction(9, 10)), (Fraction(7, 10), Fraction(4, 5))]
    cold = chebyshev_center(points, norm)
    for start in [(0, 0), (1, 1), (Fraction(1, 2), Fraction(1, 2)), (5, -3)]:
        warm = chebyshev_center(points, norm, start=start)
        assert warm.certified
        assert warm.radius == pytest.approx(cold.radius, abs=1e-9)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("norm", [L2, L32, LINF], ids=["l2", "l3/2", "linf"])
def test_nonempty_verdicts_are_downward_closed(seed, norm):
    rng = random.Random(seed)
    points = _random_points(rng, 5)
    eps = Fraction(rng.choice([3, 4, 5]), 10)
    for size in range(2, len(points) + 1):
        for subset in itertools.combinations(points, size):
            if not balls_intersect(subset, eps, norm).nonempty:
                continue
            for smaller in itertools.combinations(subset, size - 1):
                assert balls_intersect(smaller, eps, norm).nonempty


@pytest.mark.parametrize("seed", range(20))
def test_linf_oracle_is_never_inconclusive(seed):
    rng = random.Random(seed)
    count = rng.randint(2, 6)
    points: set[tuple[Fraction, ...]] = set()
    while len(points) < count:
        points.add(tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(3)))
    center = chebyshev_center(sorted(points), LINF)
    assert center.exact is not None and center.certified
    # the exact radius itself is the boundary case
    for eps in (center.exact, center.exact - Fraction(1, 10**9), center.exact + 1):
        verdict = balls_intersect(sorted(points), eps, LINF)
        assert verdict.status is not IntersectionStatus.inconclusive
        assert verdict.nonempty is (eps >= center.exact)


def test_seven_point_linf_pairs_follow_the_antihole_pattern():
    bundle = figure("antihole")
    points = bundle.distribution.points
    for i, j in itertools.combinations(range(7), 2):
        verdict = balls_intersect([points[i], points[j]], bundle.epsilon, LINF)
        adjacent_on_cycle = (j - i) % 7 in (1, 6)
        assert verdict.status is (
            IntersectionStatus.empty if adjacent_on_cycle else IntersectionStatus.nonempty
        )
