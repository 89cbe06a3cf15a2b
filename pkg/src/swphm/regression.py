"""Correlation and univariate OLS: RT = intercept + slope * CPV.

Besides the fit itself this carries the validation statistics used to judge
it: R-squared, adjusted R-squared, the two-sided slope p-value from a
Student-t test with n-2 degrees of freedom, and holdout / leave-one-out
error metrics.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc

from swphm.errors import ValidationError


@dataclass(frozen=True)
class CorrelationReport:
    r: float
    n: int


@dataclass(frozen=True)
class RegressionModel:
    """Fitted line with inference statistics (units: ms per WF unit, ms)."""

    slope: float
    intercept: float
    n: int
    r_squared: float
    adj_r_squared: float
    slope_p_value: float
    residual_std: float


def pearson_corr(x, y) -> CorrelationReport:
    """Sample Pearson correlation; requires >= 3 points and non-constant data."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("x and y must be equal-length vectors", code="shape-mismatch")
    if x.size < 3:
        raise ValidationError("need at least 3 points", code="too-few-points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0 or syy == 0:
        raise ValidationError("zero variance", code="zero-variance")
    return CorrelationReport(r=float(dx @ dy) / math.sqrt(sxx * syy), n=int(x.size))


def _t_sf_two_sided(t: float, df: int) -> float:
    # P(|T| > t) via the regularized incomplete beta function.
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def ols_fit(cpv, rt_ms) -> RegressionModel:
    """Least-squares fit of rt on cpv with R^2, adjusted R^2 and slope p-value.

    The p-value is reported as 0 when the residuals are exactly zero.
    """
    x = np.asarray(cpv, dtype=float)
    y = np.asarray(rt_ms, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("cpv and rt must be equal-length vectors", code="shape-mismatch")
    n = int(x.size)
    if n < 3:
        raise ValidationError("need at least 3 points to fit", code="too-few-points")
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise ValidationError("degenerate design: cpv is constant", code="degenerate-design")
    slope = float(dx @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (intercept + slope * x)
    sse = float(residuals @ residuals)
    sst = float((y - y.mean()) @ (y - y.mean()))
    r_squared = 1.0 if sst == 0 else 1.0 - sse / sst
    adj_r_squared = 1.0 - (1.0 - r_squared) * (n - 1) / (n - 2)
    residual_std = math.sqrt(sse / (n - 2))
    if sse == 0:
        p_value = 0.0
    else:
        se_slope = residual_std / math.sqrt(sxx)
        p_value = _t_sf_two_sided(slope / se_slope, n - 2)
    return RegressionModel(
        slope=slope,
        intercept=intercept,
        n=n,
        r_squared=r_squared,
        adj_r_squared=adj_r_squared,
        slope_p_value=p_value,
        residual_std=residual_std,
    )


def predict_rt(model: RegressionModel, cpv: float) -> float:
    """Predicted response time in ms at a cumulative weight value."""
    return model.intercept + model.slope * cpv


def split_train_test(pairs, train_fraction: float = 0.8, seed: int = 42):
    """Seeded shuffle then split; the first floor(n * fraction) pairs train."""
    pairs = list(pairs)
    if len(pairs) < 5:
        raise ValidationError("need at least 5 pairs to split", code="too-few-points")
    if not 0 < train_fraction < 1:
        raise ValidationError(
            f"train_fraction must be in (0, 1), got {train_fraction!r}",
            code="invalid-fraction",
        )
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(pairs))
    n_train = int(len(pairs) * train_fraction)
    train = [pairs[i] for i in order[:n_train]]
    test = [pairs[i] for i in order[n_train:]]
    return train, test


def evaluate(model: RegressionModel, pairs) -> dict[str, float]:
    """MAE / RMSE / max absolute error of the model on (cpv, rt_ms) pairs."""
    pairs = list(pairs)
    if not pairs:
        raise ValidationError("empty test set", code="empty-test-set")
    errors = np.array([predict_rt(model, cpv) - rt for cpv, rt in pairs])
    return {
        "mae_ms": float(np.abs(errors).mean()),
        "rmse_ms": float(math.sqrt((errors**2).mean())),
        "max_abs_err_ms": float(np.abs(errors).max()),
    }


def loocv_mae(cpv, rt_ms) -> float:
    """Leave-one-out cross-validated mean absolute error.

    Meant for the small release counts this toolkit sees (n <= 15 or so);
    each point is predicted from a fit on the remaining points.
    """
    x = list(map(float, cpv))
    y = list(map(float, rt_ms))
    if len(x) < 4:
        raise ValidationError("need at least 4 points for leave-one-out", code="too-few-points")
    abs_errors = []
    for i in range(len(x)):
        rest_x = x[:i] + x[i + 1 :]
        rest_y = y[:i] + y[i + 1 :]
        fit = ols_fit(rest_x, rest_y)
        abs_errors.append(abs(predict_rt(fit, x[i]) - y[i]))
    return float(np.mean(abs_errors))


def model_to_json(model: RegressionModel, cluster_id: int | None = None) -> dict:
    payload = {
        "slope": model.slope,
        "intercept": model.intercept,
        "n": model.n,
        "r_squared": model.r_squared,
        "adj_r_squared": model.adj_r_squared,
        "p_value": model.slope_p_value,
        "residual_std": model.residual_std,
    }
    if cluster_id is not None:
        payload["cluster_id"] = cluster_id
    return payload


def model_from_json(payload: dict) -> RegressionModel:
    try:
        return RegressionModel(
            slope=float(payload["slope"]),
            intercept=float(payload["intercept"]),
            n=int(payload["n"]),
            r_squared=float(payload["r_squared"]),
            adj_r_squared=float(payload["adj_r_squared"]),
            slope_p_value=float(payload["p_value"]),
            residual_std=float(payload["residual_std"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad regression model payload: {exc}", code="malformed-file") from exc


def save_model(model: RegressionModel, path: str | Path, cluster_id: int | None = None) -> None:
    Path(path).write_text(
        json.dumps(model_to_json(model, cluster_id), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def load_model(path: str | Path) -> RegressionModel:
    return model_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
