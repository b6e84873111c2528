"""Uniform distribution over the canonical basis, one class per basis vector."""

from __future__ import annotations

from fractions import Fraction

from ..errors import ConstructionError
from ..models import DiscreteDistribution

# Rational stand-in for 1.1 / sqrt(2): pairwise l_2 balls meet, no three share a point.
BASIS_EPSILON = Fraction(7, 9)


def canonical_basis_distribution(k: int, eps: Fraction = BASIS_EPSILON) -> DiscreteDistribution:
    """Points ``e_1..e_k`` with labels ``1..k`` and weight ``1/k`` each, for the l_2 norm.

    ``eps`` must satisfy ``2 eps >= sqrt(2)`` so every pair conflicts, and
    ``eps < sqrt(2/3)`` so no triple of balls intersects; both are checked exactly.
    """

    if k < 2:
        raise ConstructionError(f"canonical basis needs k >= 2, got {k}")
    eps = Fraction(eps)
    if 4 * eps**2 < 2:
        raise ConstructionError(f"eps={eps} too small: basis vectors do not conflict")
    if 3 * eps**2 >= 2:
        raise ConstructionError(f"eps={eps} too large: triples of balls intersect")
    points = [tuple(Fraction(int(i == j)) for j in range(k)) for i in range(k)]
    return DiscreteDistribution.uniform(points, range(1, k + 1), k)
