# Weight factors from a backlog: story points x impact factor, per release.
#
# Run: python demos/01_backlog_weights.py

from swphm import BacklogItem, Dataset, ReleaseRecord, impact_factor_of, weigh_item
from swphm.pipeline import release_weight_table, weigh_dataset

items = {
    "B1": BacklogItem(id="B1", title="Crash while saving attachments",
                      kind="fault", severity="Critical", story_points=3),
    "B2": BacklogItem(id="B2", title="Slow query on dashboards",
                      kind="fault", severity="Medium", story_points=5),
    "B3": BacklogItem(id="B3", title="Add CSV export", kind="enhancement",
                      severity="Minor", story_points=8),
    "B4": BacklogItem(id="B4", title="Cache rendered templates", kind="enhancement",
                      severity="Major", story_points=2, sign=-1),  # perf improvement
}

print("item weights (sign * story_points * impact_factor):")
for item in items.values():
    w = weigh_item(item)
    print(f"  {item.id}: {w.sign:+d} * {w.story_points} * {w.impact_factor:<5}"
          f" = {w.weight:+.2f}   ({item.severity}, {item.kind})")

# the four impact scales are a fixed lookup
print("\nimpact factor table:")
for scale in ("Critical", "Major", "Medium", "Minor"):
    print(f"  {scale:<9} -> {impact_factor_of(scale)}")

# allocate the items over two shipped releases and accumulate
dataset = Dataset(
    items=items,
    releases=(
        ReleaseRecord(version="5.0.1", items=("B1", "B2"), rt_runs_ms=(4100.0, 4180.0)),
        ReleaseRecord(version="5.0.2", items=("B3", "B4"), rt_runs_ms=(4350.0,)),
    ),
)
weighted = weigh_dataset(dataset)
print("\nper-release PV and cumulative CPV:")
for row in release_weight_table(dataset, weighted):
    print(f"  {row.version}: PV = {row.pv:+.2f}, CPV = {row.cpv:.2f}")
