"""Deterministic synthetic test bed with a known ground-truth model.

Generates a backlog and release history whose measured response times follow
a configured line RT = intercept + slope * CPV, optionally perturbed by
Gaussian noise and environment changes, plus a ground-truth sidecar so every
pipeline stage can be checked against known values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from swphm.errors import ValidationError
from swphm.ingest import dump_json, write_backlog, write_releases
from swphm.model import (
    SEVERITIES,
    STORY_POINT_SCALE,
    BacklogItem,
    Dataset,
    EnvironmentSpec,
    ReleaseRecord,
)
from swphm.prognosis import DEFAULT_CLOCK_COEFFICIENT, EnvAdjustment, env_multipliers
from swphm.weighting import impact_factor_of

_FAULT_WORDS = (
    "crash", "error", "timeout", "failure", "exception", "regression",
    "leak", "deadlock", "hang", "corruption", "overflow", "panic",
)
_ENHANCEMENT_WORDS = (
    "feature", "request", "improve", "support", "option", "workflow",
    "dashboard", "export", "filter", "shortcut", "theme", "integration",
)


@dataclass(frozen=True)
class SimConfig:
    """Ground truth and sampling knobs for one synthetic history."""

    n_releases: int = 10
    slope_ms_per_wf: float = 100.0
    intercept_ms: float = 2000.0
    noise_std_ms: float = 0.0
    items_per_release: tuple[int, int] = (3, 6)
    severity_mix: tuple[float, float, float, float] = (0.15, 0.25, 0.35, 0.25)
    seed: int = 42
    env: EnvironmentSpec = field(default_factory=EnvironmentSpec)
    env_schedule: dict[int, EnvironmentSpec] | None = None
    os_factor: float = 1.25
    clock_coefficient: float = DEFAULT_CLOCK_COEFFICIENT
    runs_per_release: int = 3
    fault_fraction: float = 0.7

    def __post_init__(self):
        if self.n_releases < 3:
            raise ValidationError("n_releases must be >= 3", code="invalid-sim-config")
        if self.noise_std_ms < 0:
            raise ValidationError("noise_std_ms must be >= 0", code="invalid-sim-config")
        lo, hi = self.items_per_release
        if not (0 <= lo <= hi):
            raise ValidationError("bad items_per_release range", code="invalid-sim-config")
        if len(self.severity_mix) != len(SEVERITIES):
            raise ValidationError(
                f"severity_mix needs {len(SEVERITIES)} entries", code="invalid-sim-config"
            )
        if any(p < 0 for p in self.severity_mix) or abs(sum(self.severity_mix) - 1.0) > 1e-9:
            raise ValidationError("severity_mix must sum to 1", code="invalid-sim-config")
        if self.runs_per_release < 1:
            raise ValidationError("runs_per_release must be >= 1", code="invalid-sim-config")
        if not 0 <= self.fault_fraction <= 1:
            raise ValidationError("fault_fraction must be in [0, 1]", code="invalid-sim-config")
        if not self.os_factor > 0:
            raise ValidationError("os_factor must be positive", code="invalid-sim-config")


def _item_text(rng: np.random.Generator, kind: str, severity: str) -> tuple[str, str]:
    pool = _FAULT_WORDS if kind == "fault" else _ENHANCEMENT_WORDS
    title_words = rng.choice(pool, size=3, replace=True)
    body_words = rng.choice(pool, size=8, replace=True)
    title = " ".join(title_words)
    body = " ".join(body_words)
    return title, f"{severity.lower()} {body}"


def _env_for_release(cfg: SimConfig, index: int) -> EnvironmentSpec:
    # a schedule entry applies from its release index onward
    env = cfg.env
    if cfg.env_schedule:
        for start in sorted(cfg.env_schedule):
            if start <= index:
                env = cfg.env_schedule[start]
    return env


def generate_dataset(cfg: SimConfig) -> tuple[Dataset, dict]:
    """Draw a synthetic dataset plus its ground-truth sidecar.

    Identical configs (same seed) produce identical datasets. With zero
    noise, per-release mean RTs land exactly on the configured line after
    environment adjustment.
    """
    rng = np.random.default_rng(cfg.seed)
    items: dict[str, BacklogItem] = {}
    releases: list[ReleaseRecord] = []
    per_release_cpv: list[float] = []
    envs = [_env_for_release(cfg, i) for i in range(cfg.n_releases)]
    adj = EnvAdjustment(
        clock_coefficient=cfg.clock_coefficient, os_factor_32_over_64=cfg.os_factor
    )
    multipliers = env_multipliers(envs, cfg.env, adj)

    counter = 0
    cpv = 0.0
    for rel_idx in range(cfg.n_releases):
        lo, hi = cfg.items_per_release
        n_items = int(rng.integers(lo, hi + 1))
        release_item_ids = []
        pv = 0.0
        for _ in range(n_items):
            counter += 1
            item_id = f"I{counter:04d}"
            kind = "fault" if rng.random() < cfg.fault_fraction else "enhancement"
            severity = SEVERITIES[int(rng.choice(len(SEVERITIES), p=list(cfg.severity_mix)))]
            story_points = int(rng.choice(STORY_POINT_SCALE))
            title, description = _item_text(rng, kind, severity)
            items[item_id] = BacklogItem(
                id=item_id,
                title=title,
                description=description,
                kind=kind,
                severity=severity,
                story_points=story_points,
            )
            release_item_ids.append(item_id)
            pv += story_points * impact_factor_of(severity)
        cpv += pv
        per_release_cpv.append(cpv)

        base_rt = cfg.intercept_ms + cfg.slope_ms_per_wf * cpv
        true_rt = base_rt * multipliers[rel_idx]
        runs = []
        for _ in range(cfg.runs_per_release):
            rt = true_rt
            if cfg.noise_std_ms > 0:
                rt = true_rt + rng.normal(0.0, cfg.noise_std_ms)
                while rt <= 0:  # truncate at zero by resampling
                    rt = true_rt + rng.normal(0.0, cfg.noise_std_ms)
            runs.append(float(rt))
        releases.append(
            ReleaseRecord(
                version=f"1.0.{rel_idx}",
                items=tuple(release_item_ids),
                env=envs[rel_idx],
                rt_runs_ms=tuple(runs),
            )
        )

    dataset = Dataset(items=items, releases=tuple(releases))
    truth = {
        "slope": cfg.slope_ms_per_wf,
        "intercept": cfg.intercept_ms,
        "os_factor": cfg.os_factor,
        "per_release_cpv": per_release_cpv,
    }
    return dataset, truth


def write_simulated(dataset: Dataset, truth: dict, outdir: str | Path) -> dict[str, Path]:
    """Write backlog.json, releases.json, and the truth.json sidecar."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "backlog": outdir / "backlog.json",
        "releases": outdir / "releases.json",
        "truth": outdir / "truth.json",
    }
    write_backlog(sorted(dataset.items.values(), key=lambda it: it.id), paths["backlog"])
    write_releases(list(dataset.releases), paths["releases"])
    dump_json(truth, paths["truth"])
    return paths
