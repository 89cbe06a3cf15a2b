# Fit RT = intercept + slope * CPV on simulated releases and validate it.
#
# Run: python demos/04_response_time_regression.py

from swphm import SimConfig, generate_dataset, mean_rt, pearson_corr
from swphm.pipeline import release_weight_table, train_from_dataset, weigh_dataset

cfg = SimConfig(n_releases=10, slope_ms_per_wf=100.0, intercept_ms=2000.0,
                noise_std_ms=60.0, seed=11)
dataset, truth = generate_dataset(cfg)
weighted = weigh_dataset(dataset)

cpvs = [row.cpv for row in release_weight_table(dataset, weighted)]
rts = [mean_rt(r) for r in dataset.releases]
print("release history (CPV -> mean RT):")
for release, cpv, rt in zip(dataset.releases, cpvs, rts):
    print(f"  {release.version}: CPV={cpv:6.2f}  RT={rt:8.1f} ms")

corr = pearson_corr(cpvs, rts)
print(f"\ncorrelation r = {corr.r:.4f} on n = {corr.n} releases")

trained = train_from_dataset(dataset, weighted, seed=11)
model = trained.model
print(f"fit: RT = {model.intercept:.1f} + {model.slope:.2f} * CPV")
print(f"     truth was  {truth['intercept']:.1f} + {truth['slope']:.2f} * CPV")
print(f"R^2 = {model.r_squared:.4f}, adjusted = {model.adj_r_squared:.4f}, "
      f"slope p-value = {model.slope_p_value:.2e}")

report = trained.report
if "holdout" in report:
    h = report["holdout"]
    print(f"holdout (80/20 split): MAE={h['mae_ms']:.1f} ms, RMSE={h['rmse_ms']:.1f} ms")
if "loocv_mae_ms" in report:
    print(f"leave-one-out MAE: {report['loocv_mae_ms']:.1f} ms")
