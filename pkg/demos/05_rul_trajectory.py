# Predict the RT trajectory for planned releases and read off the RUL.
#
# Run: python demos/05_rul_trajectory.py

from swphm import (
    BacklogItem,
    PlannedRelease,
    SimConfig,
    estimate_rul,
    generate_dataset,
    predict_trajectory,
    weigh_item,
)
from swphm.pipeline import train_from_dataset, weigh_dataset

dataset, _ = generate_dataset(SimConfig(n_releases=6, seed=3, noise_std_ms=40.0))
trained = train_from_dataset(dataset, weigh_dataset(dataset), seed=3)
print(f"trained on {trained.model.n} releases; current CPV = {trained.baseline_cpv:.2f}")

# four planned releases carrying fresh backlog items
future = [
    BacklogItem(id="N1", title="crash in importer", kind="fault",
                severity="Critical", story_points=8),
    BacklogItem(id="N2", title="filter panel", kind="enhancement",
                severity="Major", story_points=8),
    BacklogItem(id="N3", title="timeout on search", kind="fault",
                severity="Critical", story_points=5),
    BacklogItem(id="N4", title="tweak palette", kind="enhancement",
                severity="Medium", story_points=5),
]
weights = {it.id: weigh_item(it) for it in future}
allocation = {"N1": 0, "N2": 1, "N3": 2, "N4": 3}

pvs = [0.0] * 4
for item_id, idx in allocation.items():
    pvs[idx] += weights[item_id].weight
plan = [PlannedRelease(version=f"+{i+1}", pv=pv, env=trained.baseline_env)
        for i, pv in enumerate(pvs)]

trajectory = predict_trajectory(trained.model, trained.baseline_cpv, plan,
                                baseline_env=trained.baseline_env)
threshold_ms = 10_000.0
rul = estimate_rul(trajectory, threshold_ms)

print(f"\nthreshold: {threshold_ms / 1000:.0f} s")
for version, rt in trajectory:
    marker = "ok " if rt < threshold_ms else "XXX"
    print(f"  release {version}: {rt:8.1f} ms  {marker}")
state = "censored at horizon" if rul.censored else "then the threshold is crossed"
print(f"\nRUL = {rul.rul_releases} release(s) ({state})")

print("\ntrajectory CSV (plot-ready):")
print(rul.to_csv())
