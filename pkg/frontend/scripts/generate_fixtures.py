#!/usr/bin/env python3
"""Regenerate the UI parity fixtures from the real CLI and HTTP API.

Writes, for one fixed dataset/seed/allocation:
  cli_rul.json      - `swphm rul` output
  api_evaluate.json - POST /plan/evaluate response for the same allocation
  cli_plan.json     - `swphm plan` output (best plan)
  api_best.json     - POST /plan/best response for the same spec
  cards.json        - the plannable backlog cards the board would load

Run from the repo root: python frontend/scripts/generate_fixtures.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from swphm.ingest import item_to_record, release_to_record
from swphm.service import create_app
from swphm.simulate import SimConfig, generate_dataset, write_simulated

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FUTURE_ITEMS = [
    {"id": "F1", "title": "crash on save", "kind": "fault",
     "severity": "Critical", "story_points": 8},
    {"id": "F2", "title": "export feature", "kind": "enhancement",
     "severity": "Minor", "story_points": 3},
    {"id": "F3", "title": "timeout under load", "kind": "fault",
     "severity": "Major", "story_points": 8},
    {"id": "F4", "title": "minor polish", "kind": "enhancement",
     "severity": "Medium", "story_points": 5},
]
ALLOCATION = {"F1": 0, "F2": 1, "F3": 1, "F4": 2}
SPEC = {"horizon": 3, "strategy": "exhaustive", "items": ["F1", "F2", "F3", "F4"]}
THRESHOLD_S = 8.5
SEED = 9


def run_cli(*argv) -> dict:
    result = subprocess.run(
        [sys.executable, "-m", "swphm.cli", *argv], capture_output=True, text=True
    )
    if result.returncode != 0:
        raise SystemExit(f"cli failed: {argv}\n{result.stdout}\n{result.stderr}")
    return json.loads(result.stdout)


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    dataset, truth = generate_dataset(
        SimConfig(n_releases=8, slope_ms_per_wf=80.0, noise_std_ms=30.0, seed=SEED)
    )

    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        paths = write_simulated(dataset, truth, tmp_path / "data")
        trained_path = tmp_path / "trained.json"
        run_cli("train", "--backlog", str(paths["backlog"]),
                "--releases", str(paths["releases"]), "--seed", str(SEED),
                "--out", str(trained_path))
        future_path = tmp_path / "future.json"
        future_path.write_text(json.dumps(FUTURE_ITEMS), encoding="utf-8")
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(json.dumps({**SPEC, "allocation": ALLOCATION}), encoding="utf-8")

        cli_rul = run_cli("rul", "--model", str(trained_path), "--backlog", str(future_path),
                          "--plan", str(plan_path), "--threshold", str(THRESHOLD_S))
        cli_plan = run_cli("plan", "--model", str(trained_path), "--backlog", str(future_path),
                           "--plan", str(plan_path), "--threshold", str(THRESHOLD_S))

    client = TestClient(create_app())
    backlog = [item_to_record(it) for it in sorted(dataset.items.values(), key=lambda x: x.id)]
    backlog += FUTURE_ITEMS
    releases = [release_to_record(r) for r in dataset.releases]
    assert client.post("/datasets", json={"backlog": backlog, "releases": releases}).status_code == 200
    assert client.post("/train", json={"seed": SEED}).status_code == 200
    api_evaluate = client.post("/plan/evaluate", json={
        "allocation": ALLOCATION, "horizon": SPEC["horizon"], "threshold_s": THRESHOLD_S,
    }).json()
    api_best = client.post("/plan/best", json={"spec": SPEC, "threshold_s": THRESHOLD_S}).json()
    cards = client.get("/datasets").json()

    out = {
        "cli_rul.json": cli_rul,
        "cli_plan.json": cli_plan,
        "api_evaluate.json": api_evaluate,
        "api_best.json": api_best,
        "cards.json": {
            "backlog": [c for c in cards["backlog"] if c["id"] in cards["unshipped"]],
            "allocation": ALLOCATION,
            "spec": SPEC,
            "threshold_s": THRESHOLD_S,
        },
    }
    for name, payload in out.items():
        (FIXTURES / name).write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote {FIXTURES / name}")


if __name__ == "__main__":
    main()
