"""Reading and writing dataset JSON files with exact rational weights."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction

from pydantic import ValidationError

from .errors import DatasetError
from .models import DiscreteDistribution, LabeledPoint, NormSpec
from .schemas import DatasetFile

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdversarialProblem:
    """A distribution together with the (optional) radius and norm stored beside it."""

    distribution: DiscreteDistribution
    epsilon: Fraction | None
    norm: NormSpec | None


def _load(data: bytes | str) -> DatasetFile:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if not text.strip():
        raise DatasetError("empty input")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"malformed JSON: {exc}") from exc
    try:
        return DatasetFile.model_validate(raw)
    except ValidationError as exc:
        raise DatasetError(f"invalid dataset: {exc}") from exc


def parse_problem(
    data: bytes | str, *, normalize: bool = False, merge_duplicates: bool = False
) -> AdversarialProblem:
    doc = _load(data)
    if not doc.points:
        raise DatasetError("empty support")
    if len(doc.labels) != len(doc.points):
        raise DatasetError(f"{len(doc.points)} points but {len(doc.labels)} labels")
    if doc.weights is None:
        weights = [Fraction(1, len(doc.points))] * len(doc.points)
    else:
        if len(doc.weights) != len(doc.points):
            raise DatasetError(f"{len(doc.points)} points but {len(doc.weights)} weights")
        weights = list(doc.weights)

    support = [LabeledPoint(tuple(coords), label) for coords, label in zip(doc.points, doc.labels)]
    if merge_duplicates:
        merged: dict[LabeledPoint, Fraction] = {}
        for point, weight in zip(support, weights):
            merged[point] = merged.get(point, Fraction(0)) + weight
        if len(merged) < len(support):
            logger.info("Merged %d duplicate support points", len(support) - len(merged))
        support, weights = list(merged), list(merged.values())

    if normalize:
        if any(w <= 0 for w in weights):
            raise DatasetError("cannot normalize non-positive weights")
        total = sum(weights, Fraction(0))
        weights = [w / total for w in weights]

    num_classes = doc.num_classes if doc.num_classes is not None else max(doc.labels, default=1)
    distribution = DiscreteDistribution(tuple(support), tuple(weights), num_classes)
    norm = NormSpec.parse(doc.norm) if doc.norm is not None else None
    if doc.epsilon is not None and doc.epsilon < 0:
        raise DatasetError(f"epsilon must be non-negative, got {doc.epsilon}")
    return AdversarialProblem(distribution, doc.epsilon, norm)


def parse_dataset(
    data: bytes | str, *, normalize: bool = False, merge_duplicates: bool = False
) -> DiscreteDistribution:
    return parse_problem(data, normalize=normalize, merge_duplicates=merge_duplicates).distribution


def serialize_dataset(
    dist: DiscreteDistribution,
    *,
    epsilon: Fraction | None = None,
    norm: NormSpec | None = None,
) -> str:
    doc = DatasetFile(
        epsilon=epsilon,
        norm=str(norm) if norm is not None else None,
        points=[list(p.coords) for p in dist.support],
        labels=list(dist.labels),
        weights=list(dist.weights),
        num_classes=dist.num_classes if dist.num_classes != max(dist.labels) else None,
    )
    return dump_json(doc.model_dump(mode="json", exclude_none=True))


def dump_json(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
