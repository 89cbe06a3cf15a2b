import json

import pytest
from fastapi.testclient import TestClient

from swphm.cli import main
from swphm.service import create_app
from swphm.simulate import SimConfig, generate_dataset, write_simulated
from swphm.ingest import item_to_record, release_to_record


@pytest.fixture()
def sim_files(tmp_path):
    cfg = SimConfig(n_releases=10, noise_std_ms=30.0, seed=21)
    dataset, truth = generate_dataset(cfg)
    paths = write_simulated(dataset, truth, tmp_path / "data")
    return dataset, paths


@pytest.fixture()
def client():
    return TestClient(create_app())


def upload_and_train(client, dataset, seed=21):
    payload = {
        "backlog": [item_to_record(it) for it in sorted(dataset.items.values(), key=lambda x: x.id)],
        "releases": [release_to_record(r) for r in dataset.releases],
    }
    response = client.post("/datasets", json=payload)
    assert response.status_code == 200, response.text
    response = client.post("/train", json={"seed": seed})
    assert response.status_code == 200, response.text
    return response.json()


def test_adjust_endpoint_reference_example(client):
    response = client.post("/adjust", json={
        "rt_ms": 10000, "from": {"clock_ghz": 1.0}, "to": {"clock_ghz": 1.1},
    })
    assert response.status_code == 200
    assert response.json()["rt_ms"] == pytest.approx(8773.0, abs=1e-9)


def test_adjust_endpoint_calibration_422(client):
    response = client.post("/adjust", json={
        "rt_ms": 10000, "from": {"clock_ghz": 1.0}, "to": {"clock_ghz": 2.5},
    })
    assert response.status_code == 422
    assert response.json()["error"] == "calibration-range"


def test_rul_before_train_409(client, sim_files):
    response = client.post("/rul", json={"plan": {"horizon": 2, "items": []}})
    assert response.status_code == 409
    assert response.json()["error"] == "model-not-trained"


def test_upload_validates(client):
    response = client.post("/datasets", json={"backlog": [{"id": "A", "kind": "nope"}],
                                              "releases": []})
    assert response.status_code == 400
    assert response.json()["error"] == "invalid-kind"


def test_train_and_get_model(client, sim_files):
    dataset, _ = sim_files
    trained = upload_and_train(client, dataset)
    assert trained["model"]["r_squared"] > 0.9
    response = client.get("/model")
    assert response.status_code == 200
    assert response.json() == trained


def test_predict(client, sim_files):
    dataset, _ = sim_files
    upload_and_train(client, dataset)
    response = client.post("/predict", json={"cpv": 10})
    assert response.status_code == 200
    assert response.json()["rt_ms"] == pytest.approx(3000.0, rel=0.1)


FUTURE_ITEMS = [
    {"id": "F1", "title": "crash on save", "kind": "fault",
     "severity": "Critical", "story_points": 5},
    {"id": "F2", "title": "export feature", "kind": "enhancement",
     "severity": "Minor", "story_points": 3},
    {"id": "F3", "title": "timeout under load", "kind": "fault",
     "severity": "Major", "story_points": 8},
    {"id": "F4", "title": "minor polish", "kind": "enhancement",
     "severity": "Medium", "story_points": 1},
]


def combined_dataset(dataset):
    backlog = [item_to_record(it) for it in sorted(dataset.items.values(), key=lambda x: x.id)]
    backlog += FUTURE_ITEMS
    releases = [release_to_record(r) for r in dataset.releases]
    return backlog, releases


def cli_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)


def test_plan_evaluate_parity_with_cli(client, sim_files, tmp_path, capsys):
    dataset, paths = sim_files
    backlog, releases = combined_dataset(dataset)
    client.post("/datasets", json={"backlog": backlog, "releases": releases})
    client.post("/train", json={"seed": 21})

    allocation = {"F1": 0, "F2": 1, "F3": 1, "F4": 2}
    response = client.post("/plan/evaluate", json={
        "allocation": allocation, "horizon": 3, "threshold_s": 10,
    })
    assert response.status_code == 200
    api_result = response.json()

    # same inputs through the CLI
    backlog_path = tmp_path / "future.json"
    backlog_path.write_text(json.dumps(FUTURE_ITEMS), encoding="utf-8")
    model_path = tmp_path / "trained.json"
    code = main(["train", "--backlog", str(paths["backlog"]),
                 "--releases", str(paths["releases"]), "--seed", "21",
                 "--out", str(model_path)])
    capsys.readouterr()
    assert code == 0
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps({
        "horizon": 3, "items": sorted(allocation), "allocation": allocation,
    }), encoding="utf-8")
    cli_result = cli_json(capsys, "rul", "--model", str(model_path),
                          "--backlog", str(backlog_path), "--plan", str(plan_path),
                          "--threshold", "10")

    api_rul = {k: api_result[k] for k in ("trajectory", "rul_releases", "censored", "threshold_ms")}
    assert api_rul == cli_result  # value-identical, floats included


def test_plan_best_parity_with_cli(client, sim_files, tmp_path, capsys):
    dataset, paths = sim_files
    backlog, releases = combined_dataset(dataset)
    client.post("/datasets", json={"backlog": backlog, "releases": releases})
    client.post("/train", json={"seed": 21})

    spec = {"horizon": 3, "strategy": "exhaustive", "items": ["F1", "F2", "F3", "F4"]}
    response = client.post("/plan/best", json={"spec": spec, "threshold_s": 10})
    assert response.status_code == 200
    api_result = response.json()

    backlog_path = tmp_path / "future.json"
    backlog_path.write_text(json.dumps(FUTURE_ITEMS), encoding="utf-8")
    model_path = tmp_path / "trained.json"
    code = main(["train", "--backlog", str(paths["backlog"]),
                 "--releases", str(paths["releases"]), "--seed", "21",
                 "--out", str(model_path)])
    capsys.readouterr()
    assert code == 0
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(spec), encoding="utf-8")
    cli_result = cli_json(capsys, "plan", "--model", str(model_path),
                          "--backlog", str(backlog_path), "--plan", str(plan_path),
                          "--threshold", "10")
    assert api_result == cli_result


def test_predict_parity_with_cli(client, sim_files, tmp_path, capsys):
    dataset, paths = sim_files
    upload_and_train(client, dataset)
    api_result = client.post("/predict", json={"cpv": 37.25}).json()

    model_path = tmp_path / "trained.json"
    code = main(["train", "--backlog", str(paths["backlog"]),
                 "--releases", str(paths["releases"]), "--seed", "21",
                 "--out", str(model_path)])
    capsys.readouterr()
    assert code == 0
    cli_result = cli_json(capsys, "predict", "--model", str(model_path), "--cpv", "37.25")
    assert api_result == cli_result


def test_get_dataset_lists_unshipped(client, sim_files):
    dataset, _ = sim_files
    backlog, releases = combined_dataset(dataset)
    client.post("/datasets", json={"backlog": backlog, "releases": releases})
    response = client.get("/datasets")
    assert response.status_code == 200
    payload = response.json()
    assert payload["unshipped"] == ["F1", "F2", "F3", "F4"]
    assert len(payload["backlog"]) == len(backlog)
    assert len(payload["releases"]) == len(releases)


def test_upload_resets_model(client, sim_files):
    dataset, _ = sim_files
    upload_and_train(client, dataset)
    backlog, releases = combined_dataset(dataset)
    client.post("/datasets", json={"backlog": backlog, "releases": releases})
    assert client.get("/model").status_code == 409


def test_state_dir_persistence(tmp_path, sim_files):
    dataset, _ = sim_files
    state_dir = tmp_path / "state"
    first = TestClient(create_app(state_dir=str(state_dir)))
    trained = upload_and_train(first, dataset)
    # a fresh app instance restores the session from disk
    second = TestClient(create_app(state_dir=str(state_dir)))
    assert second.get("/model").json() == trained
    response = second.post("/predict", json={"cpv": 0})
    assert response.status_code == 200
