"""Weight factors: impact scales, story points, per-release PV and CPV.

The weight of an item is sign * story_points * impact_factor; a release's
PV is the sum of its item weights and CPV is the running sum of PVs across
releases. These sums are the regression's predictive signal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path

from swphm.errors import NotTrainedError, ValidationError
from swphm.model import STORY_POINT_SCALE, BacklogItem
from swphm.textclassify import NbModel, classify_nb, tokenize

# Impact-scale to numeric-factor lookup (compiled-in default, overridable).
IMPACT_FACTORS = {
    "Critical": 1.0,
    "Major": 0.75,
    "Medium": 0.5,
    "Minor": 0.25,
}


def impact_factor_of(scale: str, table: dict[str, float] | None = None) -> float:
    """Exact lookup of the numeric impact factor for a severity scale."""
    table = IMPACT_FACTORS if table is None else table
    try:
        return table[scale]
    except KeyError:
        raise ValidationError(
            f"unknown impact scale {scale!r}", code="unknown-impact-scale"
        ) from None


def load_impact_table(path: str | Path) -> dict[str, float]:
    """Read a custom impact-factor table, e.g. {"Critical": 1, ...}."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(payload, dict) or not payload:
        raise ValidationError(f"{path}: impact table must be a non-empty object", code="malformed-file")
    table = {}
    for scale, factor in payload.items():
        if not isinstance(factor, (int, float)) or isinstance(factor, bool) or factor <= 0:
            raise ValidationError(
                f"{path}: impact factor for {scale!r} must be a positive number",
                code="malformed-file",
            )
        table[str(scale)] = float(factor)
    return table


@dataclass(frozen=True)
class WeightedItem:
    """A backlog item reduced to the numbers the regression cares about."""

    item_id: str
    story_points: int
    impact_factor: float
    sign: int = 1

    def __post_init__(self):
        if self.story_points not in STORY_POINT_SCALE:
            raise ValidationError(
                f"item {self.item_id!r}: invalid story points {self.story_points!r}",
                code="invalid-story-points",
            )
        if self.sign not in (1, -1):
            raise ValidationError(
                f"item {self.item_id!r}: sign must be +1 or -1", code="invalid-sign"
            )

    @property
    def weight(self) -> float:
        return self.sign * self.story_points * self.impact_factor


@dataclass(frozen=True)
class ReleaseWeights:
    version: str
    pv: float
    cpv: float


def estimate_story_point(doc: list[str], model: NbModel) -> int:
    """Classify a token stream into one of the Fibonacci size classes.

    The sizing model is an NB classifier whose labels are the story-point
    values as strings. Explicit story points on an item always take
    precedence over this estimate (see ``weigh_item``).
    """
    if not isinstance(model, NbModel):
        raise NotTrainedError("estimate_story_point requires a trained sizing model")
    result = classify_nb(model, doc)
    try:
        sp = int(result.label)
    except ValueError:
        raise ValidationError(
            f"sizing model produced non-numeric label {result.label!r}",
            code="invalid-sizing-label",
        ) from None
    if sp not in STORY_POINT_SCALE:
        raise ValidationError(
            f"sizing model produced off-scale story points {sp!r}",
            code="invalid-sizing-label",
        )
    return sp


def weigh_item(
    item: BacklogItem,
    table: dict[str, float] | None = None,
    severity_model: NbModel | None = None,
    sizing_model: NbModel | None = None,
) -> WeightedItem:
    """Resolve severity and story points for one item and build its weight.

    Precedence is data over inference: an explicit field wins, then the
    matching classifier, and with neither available this raises.
    """
    severity = item.severity
    if severity is None and severity_model is not None:
        severity = classify_nb(severity_model, tokenize(item.text)).label
    if severity is None:
        raise ValidationError(
            f"item {item.id!r} has no severity and no severity model given",
            code="unresolved-severity",
        )
    story_points = item.story_points
    if story_points is None and sizing_model is not None:
        story_points = estimate_story_point(tokenize(item.text), sizing_model)
    if story_points is None:
        raise ValidationError(
            f"item {item.id!r} has no story points and no sizing model given",
            code="unresolved-story-points",
        )
    return WeightedItem(
        item_id=item.id,
        story_points=story_points,
        impact_factor=impact_factor_of(severity, table),
        sign=item.sign,
    )


def release_pv(items: list[WeightedItem]) -> float:
    """Total weight for one release: sum of sign * SP * IF over its items."""
    return sum(it.weight for it in items)


def cumulate_cpv(pvs: list[float]) -> list[float]:
    """Running prefix sums of per-release PVs."""
    return list(accumulate(pvs))
