"""Software prognostics: remaining-useful-life estimation over release cycles.

Pipeline: parse fault/enhancement backlogs, classify and weight them,
regress response time on cumulative weight, predict RT trajectories for
planned releases, adjust for environment changes, and search release plans
for the longest remaining useful life.
"""

from swphm.errors import (
    CalibrationRangeError,
    EnumerationCapError,
    NotTrainedError,
    SwphmError,
    ValidationError,
)
from swphm.model import (
    BacklogItem,
    Dataset,
    EnvironmentSpec,
    ReleaseRecord,
    mean_rt,
)
from swphm.ingest import load_dataset, parse_backlog, parse_measurements
from swphm.textclassify import NbModel, classify_nb, tokenize, train_nb
from swphm.weighting import (
    IMPACT_FACTORS,
    WeightedItem,
    cumulate_cpv,
    impact_factor_of,
    release_pv,
    weigh_item,
)
from swphm.clustering import assign_cluster, choose_k, cluster_releases, kmeans_fit
from swphm.regression import (
    RegressionModel,
    evaluate,
    ols_fit,
    pearson_corr,
    predict_rt,
    split_train_test,
)
from swphm.prognosis import (
    DEFAULT_THRESHOLD_MS,
    EnvAdjustment,
    PlannedRelease,
    RulEstimate,
    adjust_clock_speed,
    apply_env,
    estimate_os_factor,
    estimate_rul,
    predict_trajectory,
)
from swphm.planning import PlanResult, PlanSpec, best_plan, enumerate_allocations, evaluate_plan
from swphm.simulate import SimConfig, generate_dataset
from swphm.pipeline import (
    TrainedModels,
    search_best_plan,
    train_from_dataset,
    weigh_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "BacklogItem",
    "CalibrationRangeError",
    "Dataset",
    "DEFAULT_THRESHOLD_MS",
    "EnumerationCapError",
    "EnvAdjustment",
    "EnvironmentSpec",
    "IMPACT_FACTORS",
    "NbModel",
    "NotTrainedError",
    "PlanResult",
    "PlanSpec",
    "PlannedRelease",
    "RegressionModel",
    "ReleaseRecord",
    "RulEstimate",
    "SimConfig",
    "SwphmError",
    "TrainedModels",
    "ValidationError",
    "WeightedItem",
    "adjust_clock_speed",
    "apply_env",
    "assign_cluster",
    "best_plan",
    "choose_k",
    "classify_nb",
    "cluster_releases",
    "cumulate_cpv",
    "enumerate_allocations",
    "estimate_os_factor",
    "estimate_rul",
    "evaluate",
    "evaluate_plan",
    "generate_dataset",
    "impact_factor_of",
    "kmeans_fit",
    "load_dataset",
    "mean_rt",
    "ols_fit",
    "parse_backlog",
    "parse_measurements",
    "pearson_corr",
    "predict_rt",
    "predict_trajectory",
    "release_pv",
    "search_best_plan",
    "split_train_test",
    "tokenize",
    "train_from_dataset",
    "train_nb",
    "weigh_dataset",
    "weigh_item",
]
