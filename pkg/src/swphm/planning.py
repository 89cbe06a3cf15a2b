"""Enumerate and rank allocations of backlog items across future releases.

A plan assigns every backlog item to exactly one of ``horizon`` future
releases (empty releases are allowed; they model stabilization releases).
Exhaustive search scans all horizon^n assignments up to a cap; the greedy
strategy handles larger backlogs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from swphm.errors import EnumerationCapError, ValidationError
from swphm.model import EnvironmentSpec
from swphm.prognosis import (
    DEFAULT_THRESHOLD_MS,
    EnvAdjustment,
    PlannedRelease,
    RulEstimate,
    estimate_rul,
    predict_trajectory,
)
from swphm.regression import RegressionModel
from swphm.weighting import WeightedItem

ENUMERATION_CAP = 1_000_000

# Planned releases get synthetic ordinal versions: +1, +2, ...
def planned_version(index: int) -> str:
    return f"+{index + 1}"


@dataclass(frozen=True)
class PlanSpec:
    """What to allocate and over how many releases."""

    backlog: tuple[WeightedItem, ...]
    horizon: int
    base_env: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    env_overrides: dict[int, EnvironmentSpec] | None = None
    strategy: str = "exhaustive"

    def __post_init__(self):
        object.__setattr__(self, "backlog", tuple(self.backlog))
        if self.horizon < 1:
            raise ValidationError("horizon must be >= 1", code="invalid-horizon")
        if self.strategy not in ("exhaustive", "greedy"):
            raise ValidationError(
                f"unknown strategy {self.strategy!r}", code="invalid-strategy"
            )
        if self.env_overrides:
            for idx in self.env_overrides:
                if not 0 <= idx < self.horizon:
                    raise ValidationError(
                        f"env override index {idx} outside horizon", code="invalid-override"
                    )
        ids = [it.item_id for it in self.backlog]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate item in backlog", code="duplicate-id")

    def env_for(self, release_index: int) -> EnvironmentSpec:
        if self.env_overrides and release_index in self.env_overrides:
            return self.env_overrides[release_index]
        return self.base_env

    def sorted_backlog(self) -> tuple[WeightedItem, ...]:
        # canonical item order for enumeration and tie-breaking
        return tuple(sorted(self.backlog, key=lambda it: it.item_id))


@dataclass(frozen=True)
class PlanResult:
    """One evaluated allocation: item -> release index, plus its RUL."""

    allocation: dict[str, int]
    rul: RulEstimate
    rank_key: tuple

    def to_json(self) -> dict:
        result = {"allocation": dict(sorted(self.allocation.items()))}
        result.update(self.rul.to_json())
        return result


def enumerate_allocations(n_items: int, horizon: int, cap: int = ENUMERATION_CAP) -> Iterator[tuple[int, ...]]:
    """All horizon^n_items assignments, lexicographic over item positions.

    Zero items yield the single empty allocation. Raises when the count
    exceeds the cap, pointing at the greedy strategy.
    """
    if n_items < 0 or horizon < 1:
        raise ValidationError("need n_items >= 0 and horizon >= 1", code="invalid-plan")
    total = horizon**n_items
    if total > cap:
        raise EnumerationCapError(
            f"{horizon}^{n_items} = {total} allocations exceeds the cap of {cap}; "
            "use the greedy strategy"
        )
    return product(range(horizon), repeat=n_items)


def _release_pvs(items: tuple[WeightedItem, ...], allocation: tuple[int, ...], horizon: int) -> list[float]:
    pvs = [0.0] * horizon
    for item, idx in zip(items, allocation):
        pvs[idx] += item.weight
    return pvs


def _planned_releases(spec: PlanSpec, pvs: list[float]) -> list[PlannedRelease]:
    return [
        PlannedRelease(version=planned_version(i), pv=pv, env=spec.env_for(i))
        for i, pv in enumerate(pvs)
    ]


def evaluate_plan(
    allocation,
    spec: PlanSpec,
    model: RegressionModel | list[RegressionModel],
    current_cpv: float,
    threshold_ms: float = DEFAULT_THRESHOLD_MS,
    baseline_env: EnvironmentSpec | None = None,
    adj: EnvAdjustment | None = None,
) -> PlanResult:
    """Score one allocation: per-release PVs, trajectory, RUL, rank key.

    ``allocation`` is either a mapping item_id -> release index or a tuple
    of indices aligned with the id-sorted backlog.
    """
    items = spec.sorted_backlog()
    try:
        if isinstance(allocation, dict):
            missing = [it.item_id for it in items if it.item_id not in allocation]
            extra = set(allocation) - {it.item_id for it in items}
            if missing or extra:
                raise ValidationError(
                    f"allocation must cover the backlog exactly once "
                    f"(missing {missing}, unknown {sorted(extra)})",
                    code="invalid-allocation",
                )
            alloc_tuple = tuple(int(allocation[it.item_id]) for it in items)
        else:
            alloc_tuple = tuple(int(i) for i in allocation)
            if len(alloc_tuple) != len(items):
                raise ValidationError("allocation length must match backlog", code="invalid-allocation")
    except (TypeError, ValueError):
        raise ValidationError(
            "allocation entries must be integer release indices", code="invalid-allocation"
        ) from None
    if any(not 0 <= i < spec.horizon for i in alloc_tuple):
        raise ValidationError("allocation index outside horizon", code="invalid-allocation")

    pvs = _release_pvs(items, alloc_tuple, spec.horizon)
    trajectory = predict_trajectory(
        model, current_cpv, _planned_releases(spec, pvs), baseline_env=baseline_env, adj=adj
    )
    rul = estimate_rul(trajectory, threshold_ms)
    final_rt = trajectory[-1][1] if trajectory else 0.0
    return PlanResult(
        allocation={it.item_id: idx for it, idx in zip(items, alloc_tuple)},
        rul=rul,
        rank_key=(rul.rul_releases, -final_rt, alloc_tuple),
    )


def _better(candidate: PlanResult, incumbent: PlanResult) -> bool:
    # maximize RUL, then minimize final RT; the enumeration order itself
    # settles remaining ties in favor of the lexicographically first allocation
    if candidate.rank_key[0] != incumbent.rank_key[0]:
        return candidate.rank_key[0] > incumbent.rank_key[0]
    return candidate.rank_key[1] > incumbent.rank_key[1]


def best_plan(
    spec: PlanSpec,
    model: RegressionModel | list[RegressionModel],
    current_cpv: float,
    threshold_ms: float = DEFAULT_THRESHOLD_MS,
    baseline_env: EnvironmentSpec | None = None,
    adj: EnvAdjustment | None = None,
    cap: int = ENUMERATION_CAP,
) -> PlanResult:
    """Best allocation by (max RUL, min final RT, lexicographic allocation).

    Exhaustive strategy scans every allocation; greedy places items in
    descending |weight| order into the release that minimizes the resulting
    peak predicted RT, breaking ties by higher partial RUL and then the
    lowest release index. Both are deterministic for fixed inputs.
    """
    items = spec.sorted_backlog()
    if spec.strategy == "exhaustive":
        best: PlanResult | None = None
        for alloc in enumerate_allocations(len(items), spec.horizon, cap=cap):
            result = evaluate_plan(
                alloc, spec, model, current_cpv, threshold_ms, baseline_env, adj
            )
            if best is None or _better(result, best):
                best = result
        assert best is not None  # horizon >= 1 guarantees one allocation
        return best

    # greedy: heaviest first; placement minimizes the resulting peak RT.
    # For all-positive backlogs the peak equals the (placement-invariant)
    # final cumulative RT, so a partial-RUL tie-break keeps early releases
    # just under the threshold instead of front-loading; remaining ties go
    # to the lowest release index.
    order = sorted(range(len(items)), key=lambda i: (-abs(items[i].weight), items[i].item_id))
    assignment = [0] * len(items)
    placed: list[int] = []
    for i in order:
        best_idx, best_key = 0, None
        for candidate in range(spec.horizon):
            assignment[i] = candidate
            pvs = [0.0] * spec.horizon
            for j in placed + [i]:
                pvs[assignment[j]] += items[j].weight
            trajectory = predict_trajectory(
                model, current_cpv, _planned_releases(spec, pvs), baseline_env=baseline_env, adj=adj
            )
            peak = max(rt for _, rt in trajectory)
            partial_rul = estimate_rul(trajectory, threshold_ms).rul_releases
            key = (peak, -partial_rul, candidate)
            if best_key is None or key < best_key:
                best_idx, best_key = candidate, key
        assignment[i] = best_idx
        placed.append(i)
    return evaluate_plan(tuple(assignment), spec, model, current_cpv, threshold_ms, baseline_env, adj)
