"""Pydantic schemas for every JSON document advgap reads or writes."""

from __future__ import annotations

from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, WithJsonSchema

from .errors import DatasetError
from .models import format_rational, parse_rational


def _validate_rational(value: Any) -> Fraction:
    try:
        return parse_rational(value)
    except DatasetError as exc:
        raise ValueError(str(exc)) from exc


RationalStr = Annotated[
    Fraction,
    PlainValidator(_validate_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


class WireModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class DatasetFile(WireModel):
    epsilon: RationalStr | None = None
    norm: str | None = None
    points: list[list[RationalStr]]
    labels: list[int]
    weights: list[RationalStr] | None = None
    num_classes: int | None = Field(default=None, ge=1)


class GraphFile(WireModel):
    n: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)


class HypergraphFile(WireModel):
    n: int = Field(ge=0)
    max_edges: list[list[int]]
    weights: list[RationalStr] | None = None


class PackingFile(WireModel):
    q: list[RationalStr]


class SolveResult(WireModel):
    fp: RationalStr
    ip: RationalStr
    q_frac: list[RationalStr]
    q_int: list[int]
    dual: list[RationalStr]
    dual_value: RationalStr
    proven_optimal: bool
    nodes: int


class PerfectnessOut(WireModel):
    status: str
    kind: str | None = None
    witness: list[int] | None = None
    max_len: int


class GapReportOut(WireModel):
    fp_H: RationalStr
    fp_C: RationalStr
    ip: RationalStr
    gap: RationalStr
    term_conformal: RationalStr
    term_perfect: RationalStr
    conformal: bool
    conformal_witness: list[int] | None = None
    perfect: PerfectnessOut


class PackingValuesOut(WireModel):
    ip_G: RationalStr
    ip_H: RationalStr
    ip_C: RationalStr
    fp_G: RationalStr
    fp_H: RationalStr
    fp_C: RationalStr


class StructureSummary(WireModel):
    n: int
    num_classes: int
    dim: int
    graph_edges: int
    hyperedges: int
    max_cliques: int
    triangle_free: bool


class Certificates(WireModel):
    fp_H_primal: list[RationalStr]
    fp_H_dual: list[RationalStr]
    fp_C_primal: list[RationalStr]
    fp_C_dual: list[RationalStr]
    ip_packing: list[int]
    ip_proven_optimal: bool
    ip_nodes: int


class RunParameters(WireModel):
    epsilon: RationalStr
    norm: str
    tol: float
    node_budget: int
    hole_cap: int
    exhaustive: bool
    clique_cap: int
    merge_duplicates: bool
    normalize: bool


class RunReport(WireModel):
    input_digest: str
    parameters: RunParameters
    structures: StructureSummary
    risks: dict[str, RationalStr]
    gap_report: GapReportOut
    packing_values: PackingValuesOut
    certificates: Certificates
    max_hyperedges: list[list[int]]
    max_cliques: list[list[int]]
    timing_seconds_approx: dict[str, float] | None = None


class GraphCheckReport(WireModel):
    n: int
    edges: int
    perfect: PerfectnessOut
    triangle_free: bool
    independence_number: int | None = None
    coloring: list[int]
    colors: int


class EmbeddingReport(WireModel):
    norm: str
    epsilon: RationalStr
    dim: int
    points: list[list[RationalStr]]


class ClassifyPoint(WireModel):
    index: int
    label: int
    q: RationalStr
    witnessed: RationalStr
    margin: RationalStr
    attack_points: int


class ClassifyReport(WireModel):
    epsilon: RationalStr
    norm: str
    packing_value: RationalStr
    witnessed_accuracy: RationalStr
    deterministic: bool
    points: list[ClassifyPoint]
