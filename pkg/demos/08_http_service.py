# The planning HTTP API, exercised in-process (no server needed).
#
# Run: python demos/08_http_service.py
# For a real server: swphm serve --port 8000 --state-dir ./state

from fastapi.testclient import TestClient

from swphm import SimConfig, generate_dataset
from swphm.ingest import item_to_record, release_to_record
from swphm.service import create_app

client = TestClient(create_app())

dataset, _ = generate_dataset(
    SimConfig(n_releases=8, seed=9, slope_ms_per_wf=80.0, noise_std_ms=30.0))
backlog = [item_to_record(it) for it in sorted(dataset.items.values(), key=lambda x: x.id)]
backlog += [
    {"id": "F1", "title": "crash on save", "kind": "fault", "severity": "Critical", "story_points": 5},
    {"id": "F2", "title": "export to csv", "kind": "enhancement", "severity": "Minor", "story_points": 3},
    {"id": "F3", "title": "timeout on load", "kind": "fault", "severity": "Major", "story_points": 8},
]
releases = [release_to_record(r) for r in dataset.releases]

print("POST /datasets ->", client.post(
    "/datasets", json={"backlog": backlog, "releases": releases}).json())
print("POST /train    ->", client.post("/train", json={"seed": 21}).json()["model"])
print("POST /predict  ->", client.post("/predict", json={"cpv": 30}).json())

# a tighter 8.5 s threshold makes this backlog cross inside the horizon
evaluation = client.post("/plan/evaluate", json={
    "allocation": {"F1": 0, "F2": 1, "F3": 2},
    "horizon": 3,
    "threshold_s": 8.5,
}).json()
print("POST /plan/evaluate -> RUL", evaluation["rul_releases"],
      "censored" if evaluation["censored"] else "")

best = client.post("/plan/best", json={
    "spec": {"horizon": 3, "strategy": "exhaustive", "items": ["F1", "F2", "F3"]},
    "threshold_s": 8.5,
}).json()
print("POST /plan/best -> allocation", best["allocation"], "RUL", best["rul_releases"])

adjusted = client.post("/adjust", json={
    "rt_ms": 10_000, "from": {"clock_ghz": 1.0}, "to": {"clock_ghz": 1.1},
}).json()
print("POST /adjust   ->", adjusted, "(the 12.27%-per-10% rule)")
