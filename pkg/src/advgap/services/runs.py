"""Analysis pipeline and report assembly behind the CLI commands."""

from __future__ import annotations

import hashlib
import json
import logging
import random
import time
from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from fractions import Fraction
from typing import TypeVar

from pydantic import ValidationError

from ..analysis import GapReport, PerfectnessResult, check_perfect, decompose_gap
from ..classifier import (
    AttackSet,
    classifier_from_packing,
    packing_from_classifier,
    witnessed_adversarial_accuracy,
)
from ..config import Settings, get_settings
from ..conflict import Hypergraph, build_conflict_graph, build_structures
from ..constructions import (
    BASIS_EPSILON,
    canonical_basis_distribution,
    embed_linf,
    embed_lp,
    figure,
    fibration_distribution,
    graph_to_distribution,
    greedy_coloring,
    independence_number,
    named_graph,
)
from ..dataset import AdversarialProblem, parse_problem, serialize_dataset
from ..errors import DatasetError, InvariantViolation
from ..models import DiscreteDistribution, NormSpec, PlainGraph, parse_rational
from ..packing import (
    PackingInstance,
    optimal_packings,
    packing_values,
    require_proven,
    solve_fractional,
    solve_integral,
)
from ..schemas import (
    Certificates,
    ClassifyPoint,
    ClassifyReport,
    EmbeddingReport,
    GapReportOut,
    GraphCheckReport,
    GraphFile,
    HypergraphFile,
    PackingFile,
    PackingValuesOut,
    PerfectnessOut,
    RunParameters,
    RunReport,
    SolveResult,
    StructureSummary,
    WireModel,
)

logger = logging.getLogger(__name__)

WireT = TypeVar("WireT", bound=WireModel)

DEFAULT_NORM = NormSpec(Fraction(2))


def _one_based(vertices: Iterable[int] | None, *, keep_order: bool = False) -> list[int] | None:
    if vertices is None:
        return None
    ordered = list(vertices) if keep_order else sorted(vertices)
    return [v + 1 for v in ordered]


def perfectness_out(result: PerfectnessResult) -> PerfectnessOut:
    return PerfectnessOut(
        status=result.status.value,
        kind=result.kind,
        witness=_one_based(result.witness, keep_order=True),
        max_len=result.max_len,
    )


def gap_report_out(report: GapReport) -> GapReportOut:
    return GapReportOut(
        fp_H=report.fp_H,
        fp_C=report.fp_C,
        ip=report.ip,
        gap=report.gap,
        term_conformal=report.term_conformal,
        term_perfect=report.term_perfect,
        conformal=report.conformal,
        conformal_witness=_one_based(report.conformal_witness),
        perfect=perfectness_out(report.perfect),
    )


def _validate(model: type[WireT], raw: bytes | str) -> WireT:
    text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if not text.strip():
        raise DatasetError("empty input")
    try:
        return model.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise DatasetError(f"malformed JSON: {exc}") from exc
    except ValidationError as exc:
        raise DatasetError(f"invalid {model.__name__}: {exc}") from exc


def load_graph(raw: bytes | str) -> PlainGraph:
    doc = _validate(GraphFile, raw)
    try:
        return PlainGraph(doc.n, frozenset(tuple(e) for e in doc.edges))
    except ValueError as exc:
        raise DatasetError(str(exc)) from exc


def load_hypergraph(raw: bytes | str) -> HypergraphFile:
    doc = _validate(HypergraphFile, raw)
    for edge in doc.max_edges:
        if not edge or not all(0 <= v < doc.n for v in edge):
            raise DatasetError(f"hyperedge {edge} is empty or outside 0..{doc.n - 1}")
    return doc


def load_packing(raw: bytes | str) -> tuple[Fraction, ...]:
    return tuple(_validate(PackingFile, raw).q)


class AnalysisService:
    """Runs the conflict-structure pipeline with one fixed set of settings."""

    def __init__(self, settings: Settings | None = None) -> None:
        self.settings = settings or get_settings()
        self.timings: dict[str, float] = {}

    @contextmanager
    def _phase(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        yield
        elapsed = time.perf_counter() - started
        self.timings[name] = round(elapsed, 6)
        logger.info("Phase %s finished in %.3fs", name, elapsed)

    def resolve(
        self,
        problem: AdversarialProblem,
        epsilon: Fraction | None = None,
        norm: NormSpec | None = None,
    ) -> tuple[Fraction, NormSpec]:
        eps = epsilon if epsilon is not None else problem.epsilon
        if eps is None:
            eps = parse_rational(self.settings.default_epsilon)
        return eps, norm or problem.norm or DEFAULT_NORM

    def load(
        self, raw: bytes, *, merge_duplicates: bool = False, normalize: bool = False
    ) -> AdversarialProblem:
        return parse_problem(raw, normalize=normalize, merge_duplicates=merge_duplicates)

    def analyze(
        self,
        raw: bytes,
        *,
        epsilon: Fraction | None = None,
        norm: NormSpec | None = None,
        merge_duplicates: bool = False,
        normalize: bool = False,
        timings: bool = False,
    ) -> RunReport:
        self.timings = {}
        with self._phase("parse"):
            digest = hashlib.sha256(raw).hexdigest()
            problem = self.load(raw, merge_duplicates=merge_duplicates, normalize=normalize)
            eps, norm = self.resolve(problem, epsilon, norm)
            dist = problem.distribution
        with self._phase("structures"):
            structures = build_structures(dist, eps, norm, settings=self.settings)
        with self._phase("gap"):
            gap = decompose_gap(dist, eps, norm, structures=structures, settings=self.settings)
        with self._phase("packing_values"):
            values = packing_values(structures, dist.weights, settings=self.settings)
        if not values.ip_G == values.ip_H == values.ip_C:
            raise InvariantViolation(
                f"integral optima differ across G, H, C: {values.ip_G}, {values.ip_H}, {values.ip_C}"
            )
        if not values.fp_C <= values.fp_H <= values.fp_G:
            raise InvariantViolation(
                f"fractional optima out of order: {values.fp_C}, {values.fp_H}, {values.fp_G}"
            )

        s = self.settings
        return RunReport(
            input_digest=f"sha256:{digest}",
            parameters=RunParameters(
                epsilon=eps,
                norm=str(norm),
                tol=s.tol,
                node_budget=s.node_budget,
                hole_cap=s.hole_cap,
                exhaustive=s.exhaustive,
                clique_cap=s.clique_cap,
                merge_duplicates=merge_duplicates,
                normalize=normalize,
            ),
            structures=StructureSummary(
                n=dist.n,
                num_classes=dist.num_classes,
                dim=dist.dim,
                graph_edges=len(structures.graph.edges),
                hyperedges=len(structures.hypergraph.max_edges),
                max_cliques=len(structures.cliques.max_edges),
                triangle_free=structures.graph.is_triangle_free(),
            ),
            risks={
                "deterministic": 1 - gap.ip,
                "randomized": 1 - gap.fp_H,
                "randomization_gap": gap.gap,
            },
            gap_report=gap_report_out(gap),
            packing_values=PackingValuesOut(
                ip_G=values.ip_G, ip_H=values.ip_H, ip_C=values.ip_C,
                fp_G=values.fp_G, fp_H=values.fp_H, fp_C=values.fp_C,
            ),
            certificates=Certificates(
                fp_H_primal=list(gap.fractional_H.q),
                fp_H_dual=list(gap.fractional_H.dual),
                fp_C_primal=list(gap.fractional_C.q),
                fp_C_dual=list(gap.fractional_C.dual),
                ip_packing=list(gap.integral.q),
                ip_proven_optimal=gap.integral.proven_optimal,
                ip_nodes=gap.integral.nodes,
            ),
            max_hyperedges=[_one_based(e) or [] for e in structures.hypergraph.max_edges],
            max_cliques=[_one_based(e) or [] for e in structures.cliques.max_edges],
            timing_seconds_approx=dict(self.timings) if timings else None,
        )

    def solve(self, raw: bytes, weights: Sequence[Fraction] | None = None) -> SolveResult:
        doc = load_hypergraph(raw)
        chosen = weights if weights is not None else doc.weights
        if chosen is None:
            chosen = [Fraction(1, doc.n)] * doc.n if doc.n else []
        if len(chosen) != doc.n:
            raise DatasetError(f"{len(chosen)} weights for {doc.n} vertices")
        if any(w < 0 for w in chosen):
            raise DatasetError("weights must be non-negative")
        hypergraph = Hypergraph(doc.n, tuple(frozenset(e) for e in doc.max_edges))
        inst = PackingInstance.from_hypergraph(hypergraph, chosen)
        fractional = solve_fractional(inst)
        integral = require_proven(solve_integral(inst, settings=self.settings))
        return SolveResult(
            fp=fractional.value,
            ip=integral.value,
            q_frac=list(fractional.q),
            q_int=list(integral.q),
            dual=list(fractional.dual),
            dual_value=fractional.dual_value,
            proven_optimal=integral.proven_optimal,
            nodes=integral.nodes,
        )

    def check_graph(self, g: PlainGraph, *, with_independence: bool = False) -> GraphCheckReport:
        coloring = greedy_coloring(g)
        return GraphCheckReport(
            n=g.n,
            edges=len(g.edges),
            perfect=perfectness_out(check_perfect(g, settings=self.settings)),
            triangle_free=g.is_triangle_free(),
            independence_number=(
                independence_number(g, settings=self.settings) if with_independence else None
            ),
            coloring=list(coloring),
            colors=len(set(coloring)),
        )

    def check_dataset(
        self, raw: bytes, *, epsilon: Fraction | None = None, norm: NormSpec | None = None,
        merge_duplicates: bool = False, with_independence: bool = False,
    ) -> GraphCheckReport:
        problem = self.load(raw, merge_duplicates=merge_duplicates)
        eps, norm = self.resolve(problem, epsilon, norm)
        graph = build_conflict_graph(problem.distribution, eps, norm, settings=self.settings)
        return self.check_graph(graph, with_independence=with_independence)

    def embed(self, g: PlainGraph, eps: Fraction, norm: NormSpec) -> EmbeddingReport:
        points = embed_linf(g, eps) if norm.is_infinity else embed_lp(g, eps, norm)
        return EmbeddingReport(
            norm=str(norm), epsilon=eps, dim=len(points[0]) if points else 0,
            points=[list(p) for p in points],
        )

    def classify(
        self,
        raw: bytes,
        *,
        packing: Sequence[Fraction] | None = None,
        optimal: str | None = None,
        epsilon: Fraction | None = None,
        norm: NormSpec | None = None,
        merge_duplicates: bool = False,
    ) -> ClassifyReport:
        problem = self.load(raw, merge_duplicates=merge_duplicates)
        eps, norm = self.resolve(problem, epsilon, norm)
        dist = problem.distribution
        structures = build_structures(dist, eps, norm, settings=self.settings)
        if packing is None:
            fractional, integral = optimal_packings(
                dist, eps, norm, hypergraph=structures.hypergraph, settings=self.settings
            )
            if optimal == "integral":
                packing = tuple(Fraction(v) for v in integral.q)
            else:
                packing = fractional.q
        f = classifier_from_packing(
            dist, eps, norm, packing, hypergraph=structures.hypergraph, settings=self.settings
        )
        attacks = AttackSet.from_hypergraph(structures.hypergraph)
        witnessed = packing_from_classifier(dist, eps, norm, f, attacks)
        accuracy = witnessed_adversarial_accuracy(dist, eps, norm, f, attacks)
        return ClassifyReport(
            epsilon=eps,
            norm=str(norm),
            packing_value=sum((w * v for w, v in zip(dist.weights, f.q)), Fraction(0)),
            witnessed_accuracy=accuracy,
            deterministic=f.deterministic,
            points=[
                ClassifyPoint(
                    index=i + 1,
                    label=point.label,
                    q=f.q[i],
                    witnessed=witnessed[i],
                    margin=witnessed[i] - f.q[i],
                    attack_points=len(attacks.points_for(dist, i)),
                )
                for i, point in enumerate(dist.support)
            ],
        )

    # Generators: each returns dataset JSON with the radius and norm it was built for.

    def construct_basis(self, k: int, eps: Fraction | None = None) -> str:
        kwargs = {} if eps is None else {"eps": eps}
        dist = canonical_basis_distribution(k, **kwargs)
        return serialize_dataset(dist, epsilon=eps or BASIS_EPSILON, norm=DEFAULT_NORM)

    def construct_figure(self, name: str) -> str:
        bundle = figure(name)
        return serialize_dataset(bundle.distribution, epsilon=bundle.epsilon, norm=bundle.norm)

    def construct_graph(self, g: PlainGraph, eps: Fraction, norm: NormSpec) -> str:
        dist = graph_to_distribution(g, eps, norm, settings=self.settings)
        return serialize_dataset(dist, epsilon=eps, norm=norm)

    def construct_named(self, name: str, eps: Fraction, norm: NormSpec) -> str:
        return self.construct_graph(named_graph(name), eps, norm)

    def construct_fibration(self, base: str, t: int, eps: Fraction, norm: NormSpec) -> str:
        dist = fibration_distribution(named_graph(base), t, eps, norm, settings=self.settings)
        return serialize_dataset(dist, epsilon=eps, norm=norm)

    def construct_random(
        self, n: int, k: int, dim: int, seed: int, eps: Fraction, norm: NormSpec
    ) -> str:
        return serialize_dataset(random_distribution(n, k, dim, seed), epsilon=eps, norm=norm)


def random_distribution(
    n: int, k: int, dim: int, seed: int, *, grid: int = 10
) -> DiscreteDistribution:
    """Uniform distribution on ``n`` distinct grid points in ``[0, 1]^dim`` with labels in ``1..k``."""

    if n < 1 or k < 1 or dim < 1:
        raise DatasetError("n, k and dim must be positive")
    if n > (grid + 1) ** dim * k:
        raise DatasetError(f"cannot place {n} distinct points on the grid")
    rng = random.Random(seed)
    chosen: dict[tuple[tuple[Fraction, ...], int], None] = {}
    while len(chosen) < n:
        coords = tuple(Fraction(rng.randint(0, grid), grid) for _ in range(dim))
        chosen.setdefault((coords, rng.randint(1, k)), None)
    points = [c for c, _ in chosen]
    labels = [label for _, label in chosen]
    return DiscreteDistribution.uniform(points, labels, k)
