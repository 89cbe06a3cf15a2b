"""Group analogous releases with seeded k-means on release feature vectors.

The clusterer is hand-rolled so initialization, tie-breaking, and empty
cluster repair are fully deterministic for a fixed seed, and so the Lloyd
inertia history is observable for testing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from swphm.errors import ValidationError
from swphm.model import KINDS, SEVERITIES, BacklogItem, Dataset
from swphm.weighting import WeightedItem

FEATURE_NAMES = (
    [f"count_{kind}" for kind in KINDS]
    + [f"count_{sev}" for sev in SEVERITIES]
    + ["total_abs_weight", "item_count"]
)


def release_features(
    items: list[BacklogItem], weighted: dict[str, WeightedItem]
) -> list[float]:
    """Feature vector for one release: per-kind counts, per-severity counts,
    total absolute weight, item count."""
    kind_counts = {k: 0 for k in KINDS}
    sev_counts = {s: 0 for s in SEVERITIES}
    total_abs = 0.0
    for item in items:
        kind_counts[item.kind] += 1
        w = weighted[item.id]
        # explicit severity wins; otherwise recover it from the impact factor
        sev = item.severity or _severity_for_factor(w.impact_factor)
        if sev in sev_counts:
            sev_counts[sev] += 1
        total_abs += abs(w.weight)
    return (
        [float(kind_counts[k]) for k in KINDS]
        + [float(sev_counts[s]) for s in SEVERITIES]
        + [total_abs, float(len(items))]
    )


def _severity_for_factor(factor: float) -> str | None:
    from swphm.weighting import IMPACT_FACTORS

    for scale, f in IMPACT_FACTORS.items():
        if f == factor:
            return scale
    return None


def dataset_features(dataset: Dataset, weighted: dict[str, WeightedItem]):
    """Per-release feature matrix for a dataset, as (versions, ndarray)."""
    versions = [r.version for r in dataset.releases]
    rows = [
        release_features([dataset.items[i] for i in r.items], weighted)
        for r in dataset.releases
    ]
    return versions, np.asarray(rows, dtype=float)


@dataclass
class Standardizer:
    """Per-dimension z-score parameters; constant dimensions are dropped."""

    mean: np.ndarray
    std: np.ndarray
    kept: np.ndarray  # indices of non-constant dimensions

    @classmethod
    def fit(cls, points: np.ndarray) -> "Standardizer":
        mean = points.mean(axis=0)
        std = points.std(axis=0)
        kept = np.flatnonzero(std > 0)
        if kept.size == 0:
            raise ValidationError(
                "all feature dimensions are constant", code="degenerate-features"
            )
        return cls(mean=mean, std=std, kept=kept)

    def transform(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.mean.shape[0]:
            raise ValidationError(
                f"feature dimension mismatch: expected {self.mean.shape[0]}, "
                f"got {points.shape[1]}",
                code="dimension-mismatch",
            )
        return (points[:, self.kept] - self.mean[self.kept]) / self.std[self.kept]


@dataclass
class KmeansResult:
    """Raw k-means output on bare vectors."""

    k: int
    centroids: np.ndarray
    labels: np.ndarray
    inertia: float
    inertia_history: list[float] = field(default_factory=list)


def _squared_distances(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kpp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = [points[rng.integers(n)]]
    for _ in range(1, k):
        d2 = _squared_distances(points, np.asarray(centers)).min(axis=1)
        total = d2.sum()
        if total == 0:
            # all remaining mass on existing centers; pick uniformly
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers.append(points[idx])
    return np.asarray(centers, dtype=float)


def kmeans_fit(points, k: int, seed: int = 0, max_iter: int = 100) -> KmeansResult:
    """Seeded k-means++ init then Lloyd iterations to an assignment fixpoint.

    Deterministic for a fixed seed. An empty cluster is repaired by moving
    the point farthest from its assigned centroid into it.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] == 0:
        raise ValidationError("kmeans needs a non-empty 2-D point array", code="invalid-points")
    if not np.isfinite(points).all():
        raise ValidationError("kmeans points must be finite", code="invalid-points")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValidationError(f"k must be in [1, {n}], got {k}", code="invalid-k")

    rng = np.random.default_rng(seed)
    centroids = _kpp_init(points, k, rng)
    labels = np.full(n, -1, dtype=int)
    history: list[float] = []
    for _ in range(max_iter):
        d2 = _squared_distances(points, centroids)
        new_labels = d2.argmin(axis=1)  # argmin picks the lowest index on ties
        # repair empty clusters with the farthest point, skipping points that
        # are the sole member of their own cluster
        for cluster in range(k):
            if not (new_labels == cluster).any():
                assigned_d2 = d2[np.arange(n), new_labels].copy()
                sizes = np.bincount(new_labels, minlength=k)
                assigned_d2[sizes[new_labels] <= 1] = -1.0
                new_labels[assigned_d2.argmax()] = cluster
        if (new_labels == labels).all():
            break
        labels = new_labels
        for cluster in range(k):
            centroids[cluster] = points[labels == cluster].mean(axis=0)
        history.append(float(_squared_distances(points, centroids)[np.arange(n), labels].sum()))
    inertia = float(_squared_distances(points, centroids)[np.arange(n), labels].sum())
    return KmeansResult(k=k, centroids=centroids, labels=labels, inertia=inertia, inertia_history=history)


def mean_silhouette(points: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette coefficient; singleton-cluster points score 0."""
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    dists = np.sqrt(_squared_distances(points, points).clip(min=0.0))
    clusters = np.unique(labels)
    scores = np.zeros(n)
    for i in range(n):
        own = labels[i]
        own_mask = labels == own
        own_size = own_mask.sum()
        if own_size <= 1:
            scores[i] = 0.0
            continue
        a = dists[i, own_mask].sum() / (own_size - 1)
        b = min(
            dists[i, labels == other].mean() for other in clusters if other != own
        )
        scores[i] = (b - a) / max(a, b) if max(a, b) > 0 else 0.0
    return float(scores.mean())


def choose_k(points, k_max: int, seed: int = 0) -> int:
    """Pick k in [2, min(k_max, n-1)] maximizing mean silhouette; ties favor
    the smaller k."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] < 3:
        raise ValidationError("choose_k needs at least 3 points", code="too-few-points")
    if k_max < 2:
        raise ValidationError(f"k_max must be >= 2, got {k_max}", code="invalid-k")
    best_k, best_score = None, -np.inf
    for k in range(2, min(k_max, points.shape[0] - 1) + 1):
        fit = kmeans_fit(points, k, seed=seed)
        score = mean_silhouette(points, fit.labels)
        if score > best_score:
            best_k, best_score = k, score
    return best_k


@dataclass
class ClusterModel:
    """Release clustering: standardization + centroids + version assignments."""

    k: int
    centroids: np.ndarray  # in standardized space
    assignments: dict[str, int]
    inertia: float
    standardizer: Standardizer

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "centroids": self.centroids.tolist(),
            "assignments": self.assignments,
            "inertia": self.inertia,
            "standardization": {
                "mean": self.standardizer.mean.tolist(),
                "std": self.standardizer.std.tolist(),
                "kept": self.standardizer.kept.tolist(),
            },
        }

    @classmethod
    def from_json(cls, payload: dict) -> "ClusterModel":
        std = payload["standardization"]
        return cls(
            k=int(payload["k"]),
            centroids=np.asarray(payload["centroids"], dtype=float),
            assignments={str(v): int(c) for v, c in payload["assignments"].items()},
            inertia=float(payload["inertia"]),
            standardizer=Standardizer(
                mean=np.asarray(std["mean"], dtype=float),
                std=np.asarray(std["std"], dtype=float),
                kept=np.asarray(std["kept"], dtype=int),
            ),
        )


def cluster_releases(
    dataset: Dataset,
    weighted: dict[str, WeightedItem],
    k: int | None = None,
    k_max: int = 6,
    seed: int = 0,
) -> ClusterModel:
    """Standardize release features and cluster them; k chosen by silhouette
    when not given."""
    versions, raw = dataset_features(dataset, weighted)
    standardizer = Standardizer.fit(raw)
    z = standardizer.transform(raw)
    if k is None:
        k = choose_k(z, k_max=k_max, seed=seed) if len(versions) >= 3 else 1
    fit = kmeans_fit(z, k, seed=seed)
    return ClusterModel(
        k=fit.k,
        centroids=fit.centroids,
        assignments={v: int(c) for v, c in zip(versions, fit.labels)},
        inertia=fit.inertia,
        standardizer=standardizer,
    )


def assign_cluster(model, point) -> int:
    """Nearest-centroid assignment (Euclidean); ties go to the lowest index.

    Accepts either a ``ClusterModel`` (point given in raw feature space) or a
    ``KmeansResult`` (point given in the fit's own space).
    """
    if isinstance(model, ClusterModel):
        z = model.standardizer.transform(point)
        centroids = model.centroids
    else:
        z = np.atleast_2d(np.asarray(point, dtype=float))
        centroids = model.centroids
    if z.shape[1] != centroids.shape[1]:
        raise ValidationError(
            f"dimension mismatch: point has {z.shape[1]}, centroids have {centroids.shape[1]}",
            code="dimension-mismatch",
        )
    return int(_squared_distances(z, centroids)[0].argmin())


def save_cluster_model(model: ClusterModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_cluster_model(path: str | Path) -> ClusterModel:
    try:
        return ClusterModel.from_json(json.loads(Path(path).read_text(encoding="utf-8")))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: bad cluster model file: {exc}", code="malformed-file") from exc
