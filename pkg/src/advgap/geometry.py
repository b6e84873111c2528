"""Geometric oracle deciding whether a family of epsilon-balls has a common point.

The l_inf and l_2 paths run entirely in rationals and never return an
inconclusive verdict. Other exponents minimize the largest p-th power
distance with SLSQP and bracket the radius from below with the Lagrangian
bound ``min_x sum_i w_i ||x - x_i||_p ** p``, which splits into one-dimensional
problems per coordinate.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np
from scipy.optimize import brentq, minimize, nnls

from .config import get_settings
from .errors import DatasetError
from .models import LabeledPoint, NormSpec

logger = logging.getLogger(__name__)

REFINE_ROUNDS = 4
BOUND_SLACK = 1e-12


class IntersectionStatus(str, Enum):
    nonempty = "NonEmpty"
    empty = "Empty"
    inconclusive = "Inconclusive"


@dataclass(frozen=True)
class ChebyshevCenter:
    """Minimizer of ``max_i ||x - x_i||_p`` and its radius.

    ``exact`` holds ``radius ** exact_power`` as a rational when the solver is
    exact (power 1 for l_inf, 2 for l_2, p for two points and integer p).
    """

    center: tuple[Any, ...]
    radius: float
    certified: bool
    lower_bound: float
    exact: Fraction | None = None
    exact_power: int = 1

    def fits(self, eps: Fraction) -> bool | None:
        if self.exact is None:
            return None
        return self.exact <= Fraction(eps) ** self.exact_power


@dataclass(frozen=True)
class IntersectionVerdict:
    status: IntersectionStatus
    witness: tuple[Any, ...] | None
    margin: float

    @property
    def nonempty(self) -> bool:
        return self.status is IntersectionStatus.nonempty


def _coords(point: LabeledPoint | Sequence[Any]) -> tuple[Any, ...]:
    if isinstance(point, LabeledPoint):
        return point.coords
    return tuple(point)


def _unique(points: Iterable[LabeledPoint | Sequence[Any]]) -> list[tuple[Any, ...]]:
    seen: dict[tuple[Any, ...], None] = {}
    for point in points:
        coords = _coords(point)
        if _is_rational(coords):
            coords = tuple(Fraction(c) for c in coords)
        seen.setdefault(coords, None)
    result = list(seen)
    if not result:
        raise ValueError("at least one point is required")
    dim = len(result[0])
    if any(len(p) != dim for p in result):
        raise DatasetError("points have different dimensions")
    return result


def _is_rational(point: Sequence[Any]) -> bool:
    return all(isinstance(c, (Fraction, int)) for c in point)


def lp_distance(a: Sequence[Any], b: Sequence[Any], norm: NormSpec) -> float:
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    if diff.size == 0:
        return 0.0
    return float(np.linalg.norm(diff, ord=norm.float_p))


def _power_distance(a: Sequence[Fraction], b: Sequence[Fraction], p: int) -> Fraction:
    return sum((abs(Fraction(x) - Fraction(y)) ** p for x, y in zip(a, b)), Fraction(0))


def _linf_distance(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return max((abs(Fraction(x) - Fraction(y)) for x, y in zip(a, b)), default=Fraction(0))


def pairwise_conflict(
    a: LabeledPoint | Sequence[Any],
    b: LabeledPoint | Sequence[Any],
    eps: Fraction,
    norm: NormSpec,
    tol: float | None = None,
) -> bool:
    """True iff ``||a - b||_p <= 2 eps``; exact for l_inf and integer p."""

    x, y = _coords(a), _coords(b)
    if len(x) != len(y):
        raise DatasetError("points have different dimensions")
    if x == y:
        return True
    two_eps = 2 * Fraction(eps)
    if _is_rational(x) and _is_rational(y):
        if norm.is_infinity:
            return _linf_distance(x, y) <= two_eps
        if (p := norm.integer_p) is not None:
            return _power_distance(x, y, p) <= two_eps**p
    tol = get_settings().tol if tol is None else tol
    return lp_distance(x, y, norm) <= float(two_eps) + tol


def ball_contains(
    center: LabeledPoint | Sequence[Any],
    query: Sequence[Any],
    eps: Fraction,
    norm: NormSpec,
    tol: float | None = None,
) -> bool:
    """True iff ``query`` lies in the closed eps-ball around ``center``."""

    x, y = _coords(center), tuple(query)
    if _is_rational(x) and _is_rational(y):
        if norm.is_infinity:
            return _linf_distance(x, y) <= eps
        if (p := norm.integer_p) is not None:
            return _power_distance(x, y, p) <= Fraction(eps) ** p
    tol = get_settings().tol if tol is None else tol
    return lp_distance(x, y, norm) <= float(eps) + tol


def _linf_center(points: list[tuple[Fraction, ...]]) -> ChebyshevCenter:
    lows = [min(column) for column in zip(*points)]
    highs = [max(column) for column in zip(*points)]
    center = tuple((lo + hi) / 2 for lo, hi in zip(lows, highs))
    radius = max(((hi - lo) / 2 for lo, hi in zip(lows, highs)), default=Fraction(0))
    return ChebyshevCenter(center, float(radius), True, float(radius), radius, 1)


def _sq_dist(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _solve_exact(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    size = len(rhs)
    rows = [list(row) + [value] for row, value in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [v / lead for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [v - factor * w for v, w in zip(rows[r], rows[col])]
    return [row[-1] for row in rows]


def _circumball(
    boundary: list[tuple[Fraction, ...]],
) -> tuple[tuple[Fraction, ...], Fraction] | None:
    """Smallest ball with every boundary point on its sphere (center in their affine hull)."""

    origin = boundary[0]
    if len(boundary) == 1:
        return origin, Fraction(0)
    spans = [tuple(x - o for x, o in zip(p, origin)) for p in boundary[1:]]
    gram = [[2 * _dot(u, v) for v in spans] for u in spans]
    coeffs = _solve_exact(gram, [_dot(v, v) for v in spans])
    if coeffs is None:
        return None
    center = tuple(
        origin[k] + sum((c * v[k] for c, v in zip(coeffs, spans)), Fraction(0))
        for k in range(len(origin))
    )
    return center, _sq_dist(center, origin)


def _welzl(
    points: list[tuple[Fraction, ...]], boundary: list[tuple[Fraction, ...]], dim: int
) -> tuple[tuple[Fraction, ...], Fraction] | None:
    if not points or len(boundary) == dim + 1:
        return _circumball(boundary) if boundary else None
    last = points[-1]
    ball = _welzl(points[:-1], boundary, dim)
    if ball is not None and _sq_dist(ball[0], last) <= ball[1]:
        return ball
    return _welzl(points[:-1], boundary + [last], dim)


def _l2_center(points: list[tuple[Fraction, ...]]) -> ChebyshevCenter:
    dim = len(points[0])
    first = points[0]
    core = [first, max(points, key=lambda p: _sq_dist(p, first))]
    while True:
        ball = _welzl(core, [], dim)
        if ball is None:  # pragma: no cover - affinely independent cores always have a ball
            raise ArithmeticError("degenerate core set in exact enclosing-ball solve")
        center, r2 = ball
        worst = max(points, key=lambda p: _sq_dist(p, center))
        if _sq_dist(worst, center) <= r2:
            break
        core.append(worst)
    radius = math.sqrt(r2)
    logger.debug("l2 enclosing ball: %d points, core %d, r^2=%s", len(points), len(core), r2)
    return ChebyshevCenter(center, radius, True, radius, r2, 2)


def _powers(x: np.ndarray, pts: np.ndarray, p: float) -> np.ndarray:
    """``||x - x_i||_p ** p`` for every row ``x_i``; separable across coordinates."""
    return np.sum(np.abs(x - pts) ** p, axis=1)


def _power_gradients(x: np.ndarray, pts: np.ndarray, p: float) -> np.ndarray:
    diff = x - pts
    return p * np.sign(diff) * np.abs(diff) ** (p - 1)


def _epigraph_center(
    pts: np.ndarray, p: float, start: np.ndarray, box: np.ndarray, max_iter: int
) -> np.ndarray:
    """SLSQP on ``min s`` subject to ``||x - x_i||_p ** p <= s`` inside the bounding box."""

    m, dim = pts.shape

    def slack(z: np.ndarray) -> np.ndarray:
        return z[-1] - _powers(z[:-1], pts, p)

    def slack_jac(z: np.ndarray) -> np.ndarray:
        jac = np.ones((m, dim + 1))
        jac[:, :-1] = -_power_gradients(z[:-1], pts, p)
        return jac

    unit = np.zeros(dim + 1)
    unit[-1] = 1.0
    z0 = np.append(start, _powers(start, pts, p).max())
    result = minimize(
        lambda z: z[-1],
        z0,
        jac=lambda z: unit,
        method="SLSQP",
        bounds=[(0.0, float(hi)) for hi in box] + [(0.0, None)],
        constraints=[{"type": "ineq", "fun": slack, "jac": slack_jac}],
        options={"maxiter": max_iter, "ftol": 1e-16},
    )
    candidate = np.clip(result.x[:-1], 0.0, box)
    if _powers(candidate, pts, p).max() <= _powers(start, pts, p).max():
        return candidate
    return start


def _coordinate_minimum(column: np.ndarray, weights: np.ndarray, p: float) -> tuple[float, float]:
    """Minimizer of ``y -> sum_i w_i |y - a_i| ** p`` and a lower bound on its minimum.

    The bound comes from the tangents at both ends of a bracket whose slopes
    have opposite signs.
    """

    def value(y: float) -> float:
        return float(weights @ np.abs(y - column) ** p)

    def slope(y: float) -> float:
        diff = y - column
        return float(p * (weights @ (np.sign(diff) * np.abs(diff) ** (p - 1))))

    lo, hi = float(column.min()), float(column.max())
    if slope(lo) >= 0:
        return lo, value(lo)
    if slope(hi) <= 0:
        return hi, value(hi)
    root = float(brentq(slope, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    left, delta = root, 1e-13
    while slope(left) > 0:
        left, delta = max(lo, root - delta), delta * 16
    right, delta = root, 1e-13
    while slope(right) < 0:
        right, delta = min(hi, root + delta), delta * 16
    width = right - left
    bound = max(value(left) + slope(left) * width, value(right) - slope(right) * width)
    return root, min(bound, value(root))


def _lagrangian(weights: np.ndarray, pts: np.ndarray, p: float) -> tuple[np.ndarray, float]:
    """Minimizer of ``sum_i w_i ||x - x_i||_p ** p`` and a lower bound on its value.

    For weights on the simplex that value is a lower bound on ``radius ** p``.
    """

    solved = [_coordinate_minimum(pts[:, j], weights, p) for j in range(pts.shape[1])]
    return np.array([y for y, _ in solved]), sum(bound for _, bound in solved)


def _kkt_weights(x: np.ndarray, pts: np.ndarray, p: float) -> np.ndarray:
    """Simplex weights on the near-active points whose gradients best cancel at ``x``."""

    powers = _powers(x, pts, p)
    near = np.flatnonzero(powers >= powers.max() * (1 - 1e-6))
    grads = _power_gradients(x, pts[near], p)
    system = np.vstack([grads.T, 1e3 * np.ones(len(near))])
    rhs = np.append(np.zeros(pts.shape[1]), 1e3)
    solution, _ = nnls(system, rhs)
    weights = np.zeros(len(pts))
    weights[near] = solution if solution.sum() > 0 else 1.0
    return weights / weights.sum()


def _dual_weights(pts: np.ndarray, p: float, start: np.ndarray, max_iter: int) -> np.ndarray:
    """Maximize the Lagrangian bound over the simplex; its gradient is the vector of powers."""

    def negated(weights: np.ndarray) -> tuple[float, np.ndarray]:
        y, bound = _lagrangian(np.clip(weights, 0.0, None), pts, p)
        return -bound, -_powers(y, pts, p)

    result = minimize(
        negated,
        start,
        jac=True,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * len(start),
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0, "jac": np.ones_like}],
        options={"maxiter": max_iter, "ftol": 1e-16},
    )
    weights = np.clip(result.x, 0.0, None)
    return weights / weights.sum() if weights.sum() > 0 else start


def _general_center(
    points: list[tuple[Any, ...]],
    norm: NormSpec,
    tol: float,
    max_iter: int,
    target: float | None,
    start: Sequence[Any] | None,
) -> ChebyshevCenter:
    raw = np.array([[float(c) for c in point] for point in points])
    origin = raw.min(axis=0)
    scale = float(np.max(raw.max(axis=0) - origin))
    if scale == 0:
        return ChebyshevCenter(tuple(float(c) for c in origin), 0.0, True, 0.0)
    pts = (raw - origin) / scale
    box = pts.max(axis=0)
    p = norm.float_p

    def radius_of(x: np.ndarray) -> float:
        return scale * float(_powers(x, pts, p).max()) ** (1 / p)

    diameter = max(float(np.max(_powers(pts[i], pts, p))) for i in range(len(pts)))
    lower = scale * diameter ** (1 / p) / 2
    if start is None:
        x = box / 2
    else:
        x = np.clip((np.asarray([float(c) for c in start]) - origin) / scale, 0.0, box)
    weights: np.ndarray | None = None
    rounds = 0
    for rounds in range(1, REFINE_ROUNDS + 1):
        x = _epigraph_center(pts, p, x, box, max_iter)
        radius = radius_of(x)
        if target is not None and radius <= target + tol:
            break
        if weights is None:
            weights = _kkt_weights(x, pts, p)
        for candidate in (weights, _dual_weights(pts, p, weights, max_iter)):
            y, bound = _lagrangian(candidate, pts, p)
            certified = scale * max(bound, 0.0) ** (1 / p) * (1 - BOUND_SLACK)
            if certified > lower:
                lower, weights = certified, candidate
            if radius_of(y) < radius:
                x, radius = y, radius_of(y)
        if radius - lower <= tol:
            break
        if target is not None and lower > target + tol:
            break

    radius = radius_of(x)
    lower = min(lower, radius)
    logger.debug(
        "l_%s center: %d points, %d rounds, radius in [%.12g, %.12g]",
        norm, len(points), rounds, lower, radius,
    )
    center = tuple(float(c) for c in origin + scale * x)
    return ChebyshevCenter(center, radius, radius - lower <= tol, lower)


def chebyshev_center(
    points: Iterable[LabeledPoint | Sequence[Any]],
    norm: NormSpec,
    tol: float | None = None,
    *,
    target: float | None = None,
    max_iter: int | None = None,
    start: Sequence[Any] | None = None,
) -> ChebyshevCenter:
    """Center and radius of the smallest l_p ball containing ``points``.

    ``target`` lets the iterative solver stop as soon as the radius is known to
    lie on one side of it. ``start`` warm-starts it, typically with the center
    of a subfamily.
    """

    settings = get_settings()
    tol = settings.tol if tol is None else tol
    pts = _unique(points)
    exact = all(_is_rational(p) for p in pts)
    if len(pts) == 1:
        only = pts[0]
        return ChebyshevCenter(only, 0.0, True, 0.0, Fraction(0) if exact else None, 1)
    if exact and norm.is_infinity:
        return _linf_center(pts)
    if exact and norm.integer_p == 2:
        return _l2_center(pts)
    if len(pts) == 2:
        a, b = pts
        midpoint = tuple((x + y) / 2 for x, y in zip(a, b))
        radius = lp_distance(a, b, norm) / 2
        p_int = norm.integer_p
        if exact and p_int is not None:
            power = _power_distance(a, b, p_int) / 2**p_int
            return ChebyshevCenter(midpoint, radius, True, radius, power, p_int)
        return ChebyshevCenter(midpoint, radius, True, radius)
    max_iter = settings.geometry_max_iter if max_iter is None else max_iter
    return _general_center(pts, norm, tol, max_iter, target, start)


def balls_intersect(
    points: Iterable[LabeledPoint | Sequence[Any]],
    eps: Fraction,
    norm: NormSpec,
    tol: float | None = None,
    *,
    max_iter: int | None = None,
    start: Sequence[Any] | None = None,
) -> IntersectionVerdict:
    tol = get_settings().tol if tol is None else tol
    eps = Fraction(eps)
    center = chebyshev_center(
        points, norm, tol, target=float(eps), max_iter=max_iter, start=start
    )
    margin = center.radius - float(eps)
    decided = center.fits(eps)
    if decided is not None:
        status = IntersectionStatus.nonempty if decided else IntersectionStatus.empty
    elif center.radius <= float(eps) + tol:
        status = IntersectionStatus.nonempty
    elif center.lower_bound > float(eps) + tol:
        status = IntersectionStatus.empty
    else:
        status = IntersectionStatus.inconclusive
    witness = center.center if status is IntersectionStatus.nonempty else None
    return IntersectionVerdict(status, witness, margin)


def basis_intersection_threshold(m: int) -> float:
    """Radius at which the l_2 balls around ``e_1, ..., e_m`` start sharing a point."""
    if m < 1:
        raise ValueError("m must be positive")
    return math.sqrt((m - 1) / m)
