"""End-to-end wiring: dataset -> weights -> fitted models -> plan scoring.

This module owns the cross-cutting decisions: which releases feed the
regression, when per-cluster models replace the global one, and what a
persisted training artifact looks like.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from swphm.clustering import (
    ClusterModel,
    assign_cluster,
    cluster_releases,
    release_features,
)
from swphm.errors import ValidationError
from swphm.ingest import env_to_record
from swphm.model import BacklogItem, Dataset, EnvironmentSpec, mean_rt
from swphm.planning import PlanResult, PlanSpec, best_plan, enumerate_allocations, evaluate_plan
from swphm.prognosis import DEFAULT_THRESHOLD_MS, EnvAdjustment
from swphm.regression import (
    RegressionModel,
    evaluate,
    loocv_mae,
    model_from_json,
    model_to_json,
    ols_fit,
    pearson_corr,
    split_train_test,
)
from swphm.textclassify import NbModel
from swphm.weighting import ReleaseWeights, WeightedItem, cumulate_cpv, release_pv, weigh_item

# A cluster only gets its own regression when every cluster has at least
# this many measured releases.
MIN_MEASURED_PER_CLUSTER = 4


def weigh_dataset(
    dataset: Dataset,
    table: dict[str, float] | None = None,
    severity_model: NbModel | None = None,
    sizing_model: NbModel | None = None,
) -> dict[str, WeightedItem]:
    """Weight every backlog item, filling severity/size from classifiers."""
    return {
        item_id: weigh_item(item, table, severity_model, sizing_model)
        for item_id, item in sorted(dataset.items.items())
    }


def release_weight_table(
    dataset: Dataset, weighted: dict[str, WeightedItem]
) -> list[ReleaseWeights]:
    """Per-release PV and running CPV across the dataset's release order."""
    pvs = [release_pv([weighted[i] for i in rel.items]) for rel in dataset.releases]
    cpvs = cumulate_cpv(pvs)
    return [
        ReleaseWeights(version=rel.version, pv=pv, cpv=cpv)
        for rel, pv, cpv in zip(dataset.releases, pvs, cpvs)
    ]


@dataclass
class TrainedModels:
    """Everything a prediction needs: fitted line(s) plus the baseline state."""

    model: RegressionModel
    baseline_cpv: float
    baseline_env: EnvironmentSpec
    cluster: ClusterModel | None = None
    cluster_models: dict[int, RegressionModel] | None = None
    report: dict | None = None


def train_from_dataset(
    dataset: Dataset,
    weighted: dict[str, WeightedItem],
    seed: int = 42,
    train_fraction: float = 0.8,
    use_clusters: bool = True,
    k: int | None = None,
) -> TrainedModels:
    """Fit the response-time regression from measured releases.

    Fits one global model always. When clustering yields >= 2 clusters that
    each hold >= MIN_MEASURED_PER_CLUSTER measured releases, fits one model
    per cluster as well; predictions then use the planned release's assigned
    cluster. The report carries correlation, fit statistics, a seeded
    train/test holdout evaluation, and leave-one-out MAE for small n.
    """
    weights = release_weight_table(dataset, weighted)
    cpv_by_version = {w.version: w.cpv for w in weights}
    measured = dataset.measured_releases()
    if len(measured) < 3:
        raise ValidationError(
            f"need at least 3 measured releases to train, have {len(measured)}",
            code="too-few-points",
        )
    pairs = [(cpv_by_version[r.version], mean_rt(r)) for r in measured]
    cpvs = [p[0] for p in pairs]
    rts = [p[1] for p in pairs]

    model = ols_fit(cpvs, rts)
    corr = pearson_corr(cpvs, rts)
    report: dict = {
        "n_measured": len(measured),
        "pearson_r": corr.r,
        "r_squared": model.r_squared,
        "adj_r_squared": model.adj_r_squared,
        "p_value": model.slope_p_value,
        "residual_std_ms": model.residual_std,
    }
    if len(pairs) >= 5:
        train, test = split_train_test(pairs, train_fraction=train_fraction, seed=seed)
        holdout_model = ols_fit([p[0] for p in train], [p[1] for p in train])
        report["holdout"] = evaluate(holdout_model, test)
        report["train_fraction"] = train_fraction
    if 4 <= len(pairs) <= 15:
        report["loocv_mae_ms"] = loocv_mae(cpvs, rts)

    cluster_model: ClusterModel | None = None
    cluster_models: dict[int, RegressionModel] | None = None
    if use_clusters and len(dataset.releases) >= 3:
        cluster_model = cluster_releases(dataset, weighted, k=k, seed=seed)
        measured_by_cluster: dict[int, list[tuple[float, float]]] = {}
        for rel in measured:
            idx = cluster_model.assignments[rel.version]
            measured_by_cluster.setdefault(idx, []).append(
                (cpv_by_version[rel.version], mean_rt(rel))
            )
        eligible = cluster_model.k >= 2 and all(
            len(measured_by_cluster.get(i, [])) >= MIN_MEASURED_PER_CLUSTER
            for i in range(cluster_model.k)
        )
        if eligible:
            try:
                cluster_models = {
                    i: ols_fit([p[0] for p in pts], [p[1] for p in pts])
                    for i, pts in sorted(measured_by_cluster.items())
                }
            except ValidationError:
                cluster_models = None  # a degenerate cluster falls back to global
        report["clusters"] = {
            "k": cluster_model.k,
            "per_cluster_models": cluster_models is not None,
        }

    return TrainedModels(
        model=model,
        baseline_cpv=cpv_by_version[measured[-1].version],
        baseline_env=measured[-1].env,
        cluster=cluster_model,
        cluster_models=cluster_models,
        report=report,
    )


def model_for_items(trained: TrainedModels, items: list[BacklogItem], weighted: dict[str, WeightedItem]) -> RegressionModel:
    """Model used to predict a planned release holding these items."""
    if not trained.cluster_models or trained.cluster is None:
        return trained.model
    features = release_features(items, weighted)
    idx = assign_cluster(trained.cluster, features)
    return trained.cluster_models.get(idx, trained.model)


def _release_models(
    trained: TrainedModels,
    items_by_id: dict[str, BacklogItem],
    weighted: dict[str, WeightedItem],
    spec: PlanSpec,
    allocation: dict[str, int],
) -> RegressionModel | list[RegressionModel]:
    if not trained.cluster_models:
        return trained.model
    per_release: list[list[BacklogItem]] = [[] for _ in range(spec.horizon)]
    for item_id, idx in allocation.items():
        per_release[idx].append(items_by_id[item_id])
    return [model_for_items(trained, items, weighted) for items in per_release]


def evaluate_allocation(
    trained: TrainedModels,
    items_by_id: dict[str, BacklogItem],
    weighted: dict[str, WeightedItem],
    spec: PlanSpec,
    allocation: dict[str, int],
    threshold_ms: float = DEFAULT_THRESHOLD_MS,
    adj: EnvAdjustment | None = None,
) -> PlanResult:
    """Score one explicit allocation with cluster-matched models when active."""
    models = _release_models(trained, items_by_id, weighted, spec, allocation)
    return evaluate_plan(
        allocation, spec, models, trained.baseline_cpv, threshold_ms,
        baseline_env=trained.baseline_env, adj=adj,
    )


def search_best_plan(
    trained: TrainedModels,
    items_by_id: dict[str, BacklogItem],
    weighted: dict[str, WeightedItem],
    spec: PlanSpec,
    threshold_ms: float = DEFAULT_THRESHOLD_MS,
    adj: EnvAdjustment | None = None,
) -> PlanResult:
    """Best plan under the trained models.

    Without per-cluster models this delegates straight to the planner. With
    them, exhaustive search re-selects models per allocation; greedy places
    items using the global model, then rescoring is cluster-aware.
    """
    if not trained.cluster_models:
        return best_plan(
            spec, trained.model, trained.baseline_cpv, threshold_ms,
            baseline_env=trained.baseline_env, adj=adj,
        )
    if spec.strategy == "greedy":
        seed_result = best_plan(
            spec, trained.model, trained.baseline_cpv, threshold_ms,
            baseline_env=trained.baseline_env, adj=adj,
        )
        return evaluate_allocation(
            trained, items_by_id, weighted, spec, seed_result.allocation, threshold_ms, adj
        )
    items = spec.sorted_backlog()
    best: PlanResult | None = None
    for alloc in enumerate_allocations(len(items), spec.horizon):
        allocation = {it.item_id: idx for it, idx in zip(items, alloc)}
        result = evaluate_allocation(
            trained, items_by_id, weighted, spec, allocation, threshold_ms, adj
        )
        if best is None or result.rank_key[:2] > best.rank_key[:2]:
            best = result
    assert best is not None
    return best


def build_plan_spec(
    payload: dict,
    weighted: dict[str, WeightedItem],
    default_env: EnvironmentSpec,
) -> tuple[PlanSpec, dict[str, int] | None]:
    """Turn a plan document into a PlanSpec (+ explicit allocation if given).

    The document shape is {"horizon", "strategy"?, "items": [ids],
    "allocation"?: {id: release_index}, "env_overrides"?: {index: env},
    "base_env"?: env}; the trained baseline environment is the default
    base_env.
    """
    if not isinstance(payload, dict):
        raise ValidationError("plan must be a JSON object", code="malformed-file")
    try:
        horizon = int(payload["horizon"])
    except (KeyError, TypeError, ValueError):
        raise ValidationError("plan needs an integer 'horizon'", code="malformed-file") from None
    item_ids = payload.get("items", [])
    if not isinstance(item_ids, list):
        raise ValidationError("'items' must be a list of ids", code="malformed-file")
    backlog = []
    for item_id in item_ids:
        if item_id not in weighted:
            raise ValidationError(f"plan references unknown item {item_id!r}", code="unknown-item")
        backlog.append(weighted[item_id])
    overrides = None
    if payload.get("env_overrides"):
        overrides = {}
        for key, env_record in payload["env_overrides"].items():
            try:
                overrides[int(key)] = EnvironmentSpec(**env_record)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"bad env override {key!r}: {exc}", code="malformed-file") from exc
    base_env = default_env
    if payload.get("base_env"):
        try:
            base_env = EnvironmentSpec(**payload["base_env"])
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad base_env: {exc}", code="malformed-file") from exc
    spec = PlanSpec(
        backlog=tuple(backlog),
        horizon=horizon,
        base_env=base_env,
        env_overrides=overrides,
        strategy=payload.get("strategy", "exhaustive"),
    )
    allocation = payload.get("allocation")
    if allocation is not None:
        if not isinstance(allocation, dict):
            raise ValidationError("'allocation' must map item ids to release indices", code="malformed-file")
        try:
            allocation = {str(k): int(v) for k, v in allocation.items()}
        except (TypeError, ValueError):
            raise ValidationError(
                "allocation values must be integer release indices", code="invalid-allocation"
            ) from None
    return spec, allocation


# -- persistence ---------------------------------------------------------

def trained_to_json(trained: TrainedModels) -> dict:
    payload = {
        "model": model_to_json(trained.model),
        "baseline_cpv": trained.baseline_cpv,
        "baseline_env": env_to_record(trained.baseline_env),
        "cluster": trained.cluster.to_json() if trained.cluster else None,
        "cluster_models": (
            {str(i): model_to_json(m, cluster_id=i) for i, m in trained.cluster_models.items()}
            if trained.cluster_models
            else None
        ),
        "report": trained.report,
    }
    return payload


def trained_from_json(payload: dict) -> TrainedModels:
    try:
        return TrainedModels(
            model=model_from_json(payload["model"]),
            baseline_cpv=float(payload["baseline_cpv"]),
            baseline_env=EnvironmentSpec(**payload["baseline_env"]),
            cluster=ClusterModel.from_json(payload["cluster"]) if payload.get("cluster") else None,
            cluster_models=(
                {int(i): model_from_json(m) for i, m in payload["cluster_models"].items()}
                if payload.get("cluster_models")
                else None
            ),
            report=payload.get("report"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad trained-model payload: {exc}", code="malformed-file") from exc


def save_trained(trained: TrainedModels, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(trained_to_json(trained), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_trained(path: str | Path) -> TrainedModels:
    return trained_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
