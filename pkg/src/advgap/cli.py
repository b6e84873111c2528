"""Command-line entry point: analyze datasets, generate constructions, run solvers."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path

from pydantic import BaseModel

from .config import Settings, get_settings
from .constructions import named_graph
from .dataset import dump_json
from .errors import (
    AdvGapError,
    CliqueLimitExceeded,
    ConstructionError,
    DatasetError,
    GeometryInconclusive,
    InfeasiblePacking,
    SolverBudgetExceeded,
)
from .models import NormSpec, PlainGraph, parse_rational
from .services import AnalysisService, load_graph, load_packing

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3
EXIT_BUDGET = 4

_EXIT_CODES: tuple[tuple[type[Exception], int], ...] = (
    (GeometryInconclusive, EXIT_INCONCLUSIVE),
    (SolverBudgetExceeded, EXIT_BUDGET),
    (CliqueLimitExceeded, EXIT_BUDGET),
    (DatasetError, EXIT_USAGE),
    (ConstructionError, EXIT_USAGE),
    (InfeasiblePacking, EXIT_USAGE),
)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except DatasetError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _norm(text: str) -> NormSpec:
    try:
        return NormSpec.parse(text)
    except DatasetError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="Numerical tolerance for non-exact geometry")
    common.add_argument("--node-budget", type=int, help="Branch-and-bound node limit")
    common.add_argument("--hole-cap", type=int, help="Longest odd hole searched by default")
    common.add_argument(
        "--exhaustive", action="store_true", default=None, help="Search holes up to n"
    )
    common.add_argument("--threads", type=int, help="Worker threads (ADVGAP_THREADS)")
    common.add_argument(
        "--merge-duplicates", action="store_true", help="Sum weights of repeated points"
    )
    common.add_argument("--seed", type=int, default=0, help="Seed for random constructions")
    common.add_argument("--output", "-o", default="-", help="Write JSON here instead of stdout")
    common.add_argument("--verbose", "-v", action="count", default=0)
    return common


def _add_radius(parser: argparse.ArgumentParser, *, required: bool = False) -> None:
    parser.add_argument("--eps", type=_rational, required=required, help="Radius, e.g. 3/4")
    parser.add_argument("--norm", type=_norm, help="rational p > 1 or 'inf' (default 2)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advgap", description="Adversarial risk and randomization gap calculator"
    )
    common = _common_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="Full report for a dataset")
    analyze.add_argument("dataset", help="Dataset JSON path or '-' for stdin")
    analyze.add_argument("--normalize", action="store_true", help="Rescale weights to sum 1")
    analyze.add_argument("--timings", action="store_true", help="Include phase timings")
    _add_radius(analyze)

    construct = sub.add_parser("construct", help="Emit a generated dataset")
    kinds = construct.add_subparsers(dest="kind", required=True)
    basis = kinds.add_parser("basis", parents=[common], help="Canonical basis with K classes")
    basis.add_argument("--k", type=int, required=True)
    basis.add_argument("--eps", type=_rational)
    fig = kinds.add_parser("figure", parents=[common], help="Reference dataset by name")
    fig.add_argument("name", help="pentagon, triangle-pendant or antihole")
    graph = kinds.add_parser("graph", parents=[common], help="Embed a named graph")
    graph.add_argument("name", help="c5, c7complement, cycle9, ...")
    _add_radius(graph)
    fibration = kinds.add_parser("fibration", parents=[common], help="Iterated fibration")
    fibration.add_argument("--base", default="c5", help="Named base graph")
    fibration.add_argument("--t", type=int, default=1, help="Fibration depth")
    _add_radius(fibration)
    embed_ds = kinds.add_parser("embed", parents=[common], help="Embed a graph file")
    embed_ds.add_argument("--graph", required=True, help="Graph JSON path or '-'")
    _add_radius(embed_ds)
    rand = kinds.add_parser("random", parents=[common], help="Random grid dataset")
    rand.add_argument("--n", type=int, required=True)
    rand.add_argument("--k", type=int, default=2)
    rand.add_argument("--dim", type=int, default=2)
    _add_radius(rand)

    embed = sub.add_parser("embed", parents=[common], help="Ball-intersection embedding of a graph")
    _add_graph_source(embed)
    _add_radius(embed)

    solve = sub.add_parser("solve", parents=[common], help="Packing optima of a hypergraph")
    solve.add_argument("hypergraph", help="Hypergraph JSON path or '-'")
    solve.add_argument("--weights", help="Comma separated weights overriding the file")

    check = sub.add_parser("check", parents=[common], help="Perfectness of a graph or dataset")
    _add_graph_source(check, dataset=True)
    check.add_argument(
        "--independence", action="store_true", help="Also compute the independence number"
    )
    _add_radius(check)

    classify = sub.add_parser("classify", parents=[common], help="Witnessed accuracy of a packing")
    classify.add_argument("dataset", help="Dataset JSON path or '-'")
    mode = classify.add_mutually_exclusive_group(required=True)
    mode.add_argument("--packing", help="Packing JSON path or '-'")
    mode.add_argument("--optimal", choices=["fractional", "integral"])
    _add_radius(classify)
    return parser


def _add_graph_source(parser: argparse.ArgumentParser, *, dataset: bool = False) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--graph", help="Graph JSON path or '-'")
    source.add_argument("--named", help="Named graph such as c5 or c7complement")
    if dataset:
        source.add_argument("--dataset", help="Dataset JSON path or '-'")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, target: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _emit(payload: BaseModel | str, target: str) -> None:
    if isinstance(payload, BaseModel):
        payload = dump_json(payload.model_dump(mode="json", exclude_none=True))
    _write(payload, target)


def _settings_for(args: argparse.Namespace) -> Settings:
    overrides = {
        "tol": args.tol,
        "node_budget": args.node_budget,
        "hole_cap": args.hole_cap,
        "exhaustive": args.exhaustive,
        "threads": args.threads,
    }
    settings = get_settings().model_copy(
        update={k: v for k, v in overrides.items() if v is not None}
    )
    if args.verbose:
        settings = settings.model_copy(
            update={"log_level": "INFO" if args.verbose == 1 else "DEBUG"}
        )
    return settings


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _graph_arg(args: argparse.Namespace) -> PlainGraph:
    if args.named:
        return named_graph(args.named)
    return load_graph(_read(args.graph))


def _eps_or_default(args: argparse.Namespace, service: AnalysisService) -> Fraction:
    if args.eps is not None:
        return args.eps
    return parse_rational(service.settings.default_epsilon)


def run_analyze(service: AnalysisService, args: argparse.Namespace) -> BaseModel:
    return service.analyze(
        _read(args.dataset),
        epsilon=args.eps,
        norm=args.norm,
        merge_duplicates=args.merge_duplicates,
        normalize=args.normalize,
        timings=args.timings,
    )


def run_construct(service: AnalysisService, args: argparse.Namespace) -> str:
    norm = getattr(args, "norm", None) or NormSpec(Fraction(2))
    if args.kind == "basis":
        return service.construct_basis(args.k, args.eps)
    if args.kind == "figure":
        return service.construct_figure(args.name)
    eps = _eps_or_default(args, service)
    if args.kind == "graph":
        return service.construct_named(args.name, eps, norm)
    if args.kind == "fibration":
        return service.construct_fibration(args.base, args.t, eps, norm)
    if args.kind == "embed":
        return service.construct_graph(load_graph(_read(args.graph)), eps, norm)
    return service.construct_random(args.n, args.k, args.dim, args.seed, eps, norm)


def run_embed(service: AnalysisService, args: argparse.Namespace) -> BaseModel:
    norm = args.norm or NormSpec(Fraction(2))
    return service.embed(_graph_arg(args), _eps_or_default(args, service), norm)


def run_solve(service: AnalysisService, args: argparse.Namespace) -> BaseModel:
    weights = None
    if args.weights:
        try:
            weights = [parse_rational(w.strip()) for w in args.weights.split(",")]
        except DatasetError as exc:
            raise DatasetError(f"bad --weights: {exc}") from exc
    return service.solve(_read(args.hypergraph), weights)


def run_check(service: AnalysisService, args: argparse.Namespace) -> BaseModel:
    if args.dataset:
        return service.check_dataset(
            _read(args.dataset),
            epsilon=args.eps,
            norm=args.norm,
            merge_duplicates=args.merge_duplicates,
            with_independence=args.independence,
        )
    return service.check_graph(_graph_arg(args), with_independence=args.independence)


def run_classify(service: AnalysisService, args: argparse.Namespace) -> BaseModel:
    packing = load_packing(_read(args.packing)) if args.packing else None
    return service.classify(
        _read(args.dataset),
        packing=packing,
        optimal=args.optimal,
        epsilon=args.eps,
        norm=args.norm,
        merge_duplicates=args.merge_duplicates,
    )


COMMANDS: dict[str, Callable[[AnalysisService, argparse.Namespace], BaseModel | str]] = {
    "analyze": run_analyze,
    "construct": run_construct,
    "embed": run_embed,
    "solve": run_solve,
    "check": run_check,
    "classify": run_classify,
}


def _exit_code(exc: Exception) -> int:
    for kind, code in _EXIT_CODES:
        if isinstance(exc, kind):
            return code
    return 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    settings = _settings_for(args)
    _configure_logging(settings.log_level)
    service = AnalysisService(settings)

    try:
        _emit(COMMANDS[args.command](service, args), args.output)
    except AdvGapError as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"advgap: {message}", file=sys.stderr)
        return _exit_code(exc)
    return 0
