from fractions import Fraction

import networkx as nx
import pytest

from advgap.analysis import (
    PerfectStatus,
    check_conformal,
    check_perfect,
    decompose_gap,
    default_max_len,
    find_odd_hole,
)
from advgap.config import Settings
from advgap.conflict import CliqueHypergraph, ConflictHypergraph, build_structures
from advgap.constructions import canonical_basis_distribution, figure, named_graph
from advgap.models import NormSpec, PlainGraph
from advgap.services import random_distribution

from .conftest import L2, LINF


def _graph(nx_graph: nx.Graph) -> PlainGraph:
    return PlainGraph.from_networkx(nx_graph)


def test_default_max_len():
    assert default_max_len(4) == 5
    assert default_max_len(9) == 9
    assert default_max_len(10) == 9
    assert default_max_len(40) == 13
    assert default_max_len(40, exhaustive=True) == 39
    assert default_max_len(40, cap=7) == 7


def test_c5_is_its_own_odd_hole(c5):
    result = check_perfect(c5)
    assert result.status is PerfectStatus.not_perfect
    assert result.kind == "hole"
    assert result.witness == (0, 1, 2, 3, 4)


def test_c7_complement_has_an_antihole():
    result = check_perfect(named_graph("c7complement"))
    assert result.status is PerfectStatus.not_perfect
    assert result.kind == "antihole"
    assert result.witness == (0, 1, 2, 3, 4, 5, 6)


def test_hole_search_prefers_the_shortest_hole():
    # a 7-cycle with a chord that closes a 5-cycle 0-1-2-3-4
    graph = _graph(nx.cycle_graph(7))
    graph = PlainGraph(7, graph.edges | {(0, 4)})
    assert find_odd_hole(graph, 7) == (0, 1, 2, 3, 4)


def test_find_odd_hole_validates_length(c5):
    with pytest.raises(ValueError):
        find_odd_hole(c5, 6)
    with pytest.raises(ValueError):
        find_odd_hole(c5, 3)


@pytest.mark.parametrize(
    "graph",
    [
        nx.path_graph(8),
        nx.complete_graph(6),
        nx.complete_bipartite_graph(3, 4),
        nx.cycle_graph(6),
        nx.empty_graph(3),
        nx.petersen_graph().subgraph(range(4)),
    ],
    ids=["path", "complete", "bipartite", "even-cycle", "empty", "small"],
)
def test_perfect_graphs(graph):
    assert check_perfect(_graph(graph)).status is PerfectStatus.perfect


def test_long_hole_beyond_the_cap_is_inconclusive():
    settings = Settings(_env_file=None, hole_cap=7)
    result = check_perfect(named_graph("cycle9"), settings=settings)
    assert result.status is PerfectStatus.inconclusive
    assert result.max_len == 7
    exhaustive = settings.model_copy(update={"exhaustive": True})
    found = check_perfect(named_graph("cycle9"), settings=exhaustive)
    assert found.status is PerfectStatus.not_perfect
    assert len(found.witness) == 9


def test_parallel_search_agrees(c5):
    threaded = Settings(_env_file=None, threads=2)
    assert check_perfect(c5, settings=threaded).witness == (0, 1, 2, 3, 4)
    assert check_perfect(named_graph("c7complement"), settings=threaded).kind == "antihole"


def test_conformality_on_basis_names_the_missing_clique():
    structures = build_structures(canonical_basis_distribution(3), Fraction(7, 9), L2)
    check = check_conformal(structures.hypergraph, structures.cliques)
    assert not check.conformal
    assert check.witness == frozenset({0, 1, 2})


def test_conformality_requires_matching_vertex_sets():
    with pytest.raises(ValueError):
        check_conformal(ConflictHypergraph(2, ()), CliqueHypergraph(3, ()))


def test_pentagon_gap_is_all_perfectness(pentagon):
    report = decompose_gap(pentagon.distribution, pentagon.epsilon, pentagon.norm)
    assert (report.fp_H, report.fp_C, report.ip) == (Fraction(1, 2), Fraction(1, 2), Fraction(2, 5))
    assert report.gap == Fraction(1, 10)
    assert report.term_conformal == 0
    assert report.term_perfect == Fraction(1, 10)
    assert report.conformal
    assert report.perfect.status is PerfectStatus.not_perfect


def test_triangle_pendant_has_zero_gap(triangle_pendant):
    bundle = triangle_pendant
    report = decompose_gap(bundle.distribution, bundle.epsilon, bundle.norm)
    assert report.fp_H == report.ip == Fraction(1, 2)
    assert report.gap == 0
    assert report.conformal
    assert report.perfect.status is PerfectStatus.perfect


@pytest.mark.parametrize("k", range(2, 11))
def test_basis_gap_is_all_non_conformality(k):
    report = decompose_gap(canonical_basis_distribution(k), Fraction(7, 9), L2)
    assert report.fp_H == Fraction(1, 2)
    assert report.ip == report.fp_C == Fraction(1, k)
    assert report.gap == Fraction(1, 2) - Fraction(1, k)
    assert report.term_perfect == 0
    assert report.conformal is (k == 2)


def test_antihole_gap():
    bundle = figure("antihole")
    report = decompose_gap(bundle.distribution, bundle.epsilon, bundle.norm)
    assert report.conformal
    assert report.perfect.kind == "antihole"
    assert report.ip == Fraction(2, 7)
    assert report.fp_C == Fraction(1, 3)
    assert report.gap == Fraction(1, 21)


@pytest.mark.parametrize("seed", range(6))
def test_gap_terms_add_up(seed):
    dist = random_distribution(8, 3, 2, seed)
    report = decompose_gap(dist, Fraction(3, 10), L2)
    assert report.gap == report.term_conformal + report.term_perfect
    assert report.term_conformal >= 0 and report.term_perfect >= 0
    if report.gap > 0:
        assert not report.conformal or report.perfect.status is not PerfectStatus.perfect


@pytest.mark.parametrize("seed", range(100))
def test_two_classes_never_gain_from_randomization(seed):
    norm = [L2, LINF, NormSpec(Fraction(3)), NormSpec(Fraction(3, 2))][seed % 4]
    dist = random_distribution(4 + seed % 9, 2, 1 + seed % 3, seed)
    report = decompose_gap(dist, Fraction((1, 2, 3)[seed % 3], 10), norm)
    assert report.gap == 0
    assert report.conformal
    assert report.perfect.status is PerfectStatus.perfect
