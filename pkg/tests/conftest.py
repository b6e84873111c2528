from __future__ import annotations

import itertools
from collections.abc import Sequence
from fractions import Fraction

import pytest

from advgap.config import Settings, get_settings
from advgap.constructions import figure
from advgap.models import NormSpec, PlainGraph

L2 = NormSpec(Fraction(2))
LINF = NormSpec.infinity()


@pytest.fixture(autouse=True)
def _isolated_settings(monkeypatch: pytest.MonkeyPatch):
    for name in ("ADVGAP_THREADS", "ADVGAP_NODE_BUDGET", "ADVGAP_HOLE_CAP", "ADVGAP_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings() -> Settings:
    return Settings(_env_file=None)


@pytest.fixture
def pentagon():
    return figure("pentagon")


@pytest.fixture
def triangle_pendant():
    return figure("triangle-pendant")


@pytest.fixture
def c5() -> PlainGraph:
    return PlainGraph(5, frozenset((i, (i + 1) % 5) for i in range(5)))


def brute_force_packing(
    n: int, constraints: Sequence[frozenset[int]], weights: Sequence[Fraction]
) -> Fraction:
    """Best 0/1 packing by enumerating every vertex subset."""

    best = Fraction(0)
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            chosen = set(subset)
            if all(len(chosen & c) <= 1 for c in constraints):
                best = max(best, sum((weights[v] for v in subset), Fraction(0)))
    return best
