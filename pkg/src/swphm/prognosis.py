"""RT trajectories across planned releases, RUL, environmental adjustment.

RUL is a count of release cycles, not wall time: the number of future
releases whose predicted response time stays under the threshold. Clock
speed changes adjust predicted RT linearly (12.27% improvement per 10%
speed increase by default); OS word-size changes apply an empirical
32-bit/64-bit ratio.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from swphm.errors import CalibrationRangeError, ValidationError
from swphm.model import EnvironmentSpec
from swphm.regression import RegressionModel, predict_rt

# RT ceiling defining end of useful life: 10 s, the attention-limit default.
DEFAULT_THRESHOLD_MS = 10_000.0

# Fractional RT improvement per unit fractional clock-speed increase,
# calibrated as a mean 12.27% decrease per 10% increase.
DEFAULT_CLOCK_COEFFICIENT = 1.227


@dataclass(frozen=True)
class PlannedRelease:
    """A future release: predicted-variable increment plus its environment."""

    version: str
    pv: float
    env: EnvironmentSpec = field(default_factory=EnvironmentSpec)


@dataclass(frozen=True)
class RulEstimate:
    """Predicted trajectory with the threshold-crossing summary.

    ``rul_releases`` counts the leading releases with RT below the
    threshold; ``censored`` means no crossing happened within the horizon,
    so the true RUL exceeds it.
    """

    trajectory: tuple[tuple[str, float], ...]
    rul_releases: int
    censored: bool
    threshold_ms: float

    def to_json(self) -> dict:
        return {
            "trajectory": [
                {"version": v, "rt_ms": rt, "below_threshold": rt < self.threshold_ms}
                for v, rt in self.trajectory
            ],
            "rul_releases": self.rul_releases,
            "censored": self.censored,
            "threshold_ms": self.threshold_ms,
        }

    def to_csv(self) -> str:
        """Plot-ready trajectory: version, rt_ms, below_threshold."""
        lines = ["version,rt_ms,below_threshold"]
        for v, rt in self.trajectory:
            lines.append(f"{v},{rt!r},{str(rt < self.threshold_ms).lower()}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EnvAdjustment:
    """Environment-change coefficients.

    ``os_factor_32_over_64`` is the mean ratio of 32-bit to 64-bit response
    times; it stays None until estimated from data or configured, and OS
    word-size changes raise without it.
    """

    clock_coefficient: float = DEFAULT_CLOCK_COEFFICIENT
    os_factor_32_over_64: float | None = None

    def __post_init__(self):
        if not self.clock_coefficient > 0:
            raise ValidationError(
                "clock coefficient must be positive", code="invalid-adjustment"
            )
        if self.os_factor_32_over_64 is not None:
            if not self.os_factor_32_over_64 > 0:
                raise ValidationError("os factor must be positive", code="invalid-adjustment")
            if self.os_factor_32_over_64 < 1:
                warnings.warn(
                    "os factor below 1 means 32-bit outperformed 64-bit; "
                    "check the measurement pairing",
                    stacklevel=2,
                )


def adjust_clock_speed(
    rt_o_ms: float, hz_o: float, hz_n: float, coeff: float = DEFAULT_CLOCK_COEFFICIENT
) -> float:
    """Adjust a predicted RT for a clock-speed change.

    rt_new = rt_old * (1 - coeff * (hz_new - hz_old) / hz_old). The linear
    rule was calibrated on modest speed steps; a relative increase of
    1/coeff or more would drive RT to zero or below, so that raises instead
    of clamping.
    """
    if not hz_o > 0 or not hz_n > 0:
        raise ValidationError("clock speeds must be positive", code="invalid-clock")
    factor = 1.0 - coeff * (hz_n - hz_o) / hz_o
    if factor <= 0:
        raise CalibrationRangeError(
            f"clock change {hz_o} -> {hz_n} GHz is outside calibrated range "
            f"(adjustment factor {factor:.4f} <= 0)"
        )
    return rt_o_ms * factor


def estimate_os_factor(paired: list[tuple[float, float]]) -> float:
    """Mean per-release ratio rt_32bit / rt_64bit from paired measurements."""
    if not paired:
        raise ValidationError("no measurement pairs", code="empty-pairs")
    ratios = []
    for rt32, rt64 in paired:
        if not rt32 > 0 or not rt64 > 0:
            raise ValidationError("paired RTs must be positive", code="invalid-rt-run")
        ratios.append(rt32 / rt64)
    return sum(ratios) / len(ratios)


def apply_env(
    rt_ms: float,
    baseline: EnvironmentSpec,
    target: EnvironmentSpec,
    adj: EnvAdjustment,
) -> float:
    """Re-express an RT predicted under ``baseline`` for ``target`` hardware.

    OS word-size change applies first (multiply by the os factor going
    64->32, divide going 32->64), then the clock-speed rule. Identical
    environments return the input exactly. RAM and disk differences are
    out of scope and ignored.
    """
    if not rt_ms > 0:
        raise ValidationError("rt must be positive", code="invalid-rt-run")
    if baseline == target:
        return rt_ms
    rt = rt_ms
    if baseline.os_bits != target.os_bits:
        if adj.os_factor_32_over_64 is None:
            raise ValidationError(
                "OS word size changes but no 32/64 factor is configured or estimated",
                code="os-factor-required",
            )
        if baseline.os_bits == 64:  # 64 -> 32: slower
            rt = rt * adj.os_factor_32_over_64
        else:  # 32 -> 64: faster
            rt = rt / adj.os_factor_32_over_64
    if baseline.clock_ghz != target.clock_ghz:
        rt = adjust_clock_speed(rt, baseline.clock_ghz, target.clock_ghz, adj.clock_coefficient)
    return rt


def env_multipliers(
    envs: list[EnvironmentSpec],
    baseline: EnvironmentSpec | None,
    adj: EnvAdjustment,
) -> list[float]:
    """Cumulative RT multiplier per release for a sequence of environments.

    Changes compose release by release, each step relative to the previous
    release's environment, starting from ``baseline`` (or the first
    release's environment when no baseline is given).
    """
    prev = baseline if baseline is not None else (envs[0] if envs else None)
    multiplier = 1.0
    out = []
    for env in envs:
        if prev is not None and env != prev:
            multiplier *= apply_env(1.0, prev, env, adj)
            prev = env
        out.append(multiplier)
    return out


def predict_trajectory(
    model: RegressionModel | list[RegressionModel],
    current_cpv: float,
    plan: list[PlannedRelease],
    baseline_env: EnvironmentSpec | None = None,
    adj: EnvAdjustment | None = None,
) -> list[tuple[str, float]]:
    """Predicted (version, rt_ms) per planned release.

    The cumulative predictive variable keeps summing forward from
    ``current_cpv``; each release's RT comes off the fitted line and is then
    scaled by the composed environment multiplier relative to the
    environment the model was fitted on. ``model`` may be one fitted model
    or a per-release list (cluster-matched models).
    """
    if isinstance(model, RegressionModel):
        models = [model] * len(plan)
    else:
        models = list(model)
        if len(models) != len(plan):
            raise ValidationError(
                "per-release model list length does not match plan", code="model-plan-mismatch"
            )
    if adj is None:
        adj = EnvAdjustment()
    multipliers = env_multipliers([r.env for r in plan], baseline_env, adj)

    trajectory: list[tuple[str, float]] = []
    cpv = current_cpv
    for release, rel_model, multiplier in zip(plan, models, multipliers):
        cpv += release.pv
        rt = predict_rt(rel_model, cpv)
        if multiplier != 1.0:
            rt = rt * multiplier
        trajectory.append((release.version, rt))
    return trajectory


def estimate_rul(
    trajectory: list[tuple[str, float]], threshold_ms: float = DEFAULT_THRESHOLD_MS
) -> RulEstimate:
    """Count leading releases with predicted RT below the threshold.

    The first release at or above the threshold ends the useful life; if
    none crosses, the estimate is censored at the horizon.
    """
    if not threshold_ms > 0:
        raise ValidationError("threshold must be positive", code="invalid-threshold")
    rul = len(trajectory)
    censored = True
    for i, (_, rt) in enumerate(trajectory):
        if rt >= threshold_ms:
            rul = i
            censored = False
            break
    return RulEstimate(
        trajectory=tuple((v, rt) for v, rt in trajectory),
        rul_releases=rul,
        censored=censored,
        threshold_ms=threshold_ms,
    )
