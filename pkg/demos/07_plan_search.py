# Search release plans: which allocation of the backlog keeps RT under the
# threshold for the most releases?
#
# Run: python demos/07_plan_search.py

from swphm import PlanSpec, SimConfig, best_plan, generate_dataset
from swphm.planning import enumerate_allocations
from swphm.pipeline import train_from_dataset, weigh_dataset
from swphm.weighting import WeightedItem

dataset, _ = generate_dataset(
    SimConfig(n_releases=8, seed=9, slope_ms_per_wf=80.0, noise_std_ms=40.0))
trained = train_from_dataset(dataset, weigh_dataset(dataset), seed=9)

backlog = (
    WeightedItem("P1", 8, 1.0),    # critical, heavy
    WeightedItem("P2", 8, 0.75),
    WeightedItem("P3", 8, 1.0),
    WeightedItem("P4", 5, 1.0),
    WeightedItem("P5", 5, 0.75),
    WeightedItem("P6", 3, 1.0),
)
horizon = 3
total = len(list(enumerate_allocations(len(backlog), horizon)))
print(f"{len(backlog)} items over {horizon} releases -> {total} possible plans")

threshold_ms = 10_000.0
spec = PlanSpec(backlog=backlog, horizon=horizon)
winner = best_plan(spec, trained.model, trained.baseline_cpv, threshold_ms,
                   baseline_env=trained.baseline_env)

print(f"\nbest plan (exhaustive): RUL = {winner.rul.rul_releases} releases"
      f"{' (censored)' if winner.rul.censored else ''}")
for release_index in range(horizon):
    members = sorted(i for i, r in winner.allocation.items() if r == release_index)
    version, rt = winner.rul.trajectory[release_index]
    print(f"  release {version}: {members or '(stabilization, empty)'} -> {rt:8.1f} ms")

greedy_spec = PlanSpec(backlog=backlog, horizon=horizon, strategy="greedy")
greedy = best_plan(greedy_spec, trained.model, trained.baseline_cpv, threshold_ms,
                   baseline_env=trained.baseline_env)
print(f"\ngreedy strategy for comparison: RUL = {greedy.rul.rul_releases} releases")
