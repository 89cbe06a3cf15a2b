import numpy as np
import pytest

from swphm.errors import ValidationError
from swphm.model import EnvironmentSpec, mean_rt
from swphm.pipeline import release_weight_table, weigh_dataset
from swphm.prognosis import EnvAdjustment, env_multipliers
from swphm.simulate import SimConfig, generate_dataset, write_simulated


def test_noiseless_rts_on_the_line():
    cfg = SimConfig(n_releases=8, slope_ms_per_wf=100.0, intercept_ms=2000.0,
                    noise_std_ms=0.0, seed=1)
    dataset, truth = generate_dataset(cfg)
    for release, cpv in zip(dataset.releases, truth["per_release_cpv"]):
        expected = 2000.0 + 100.0 * cpv
        assert mean_rt(release) == pytest.approx(expected, abs=1e-9)


def test_truth_cpv_matches_recomputed_weights():
    cfg = SimConfig(n_releases=6, seed=3)
    dataset, truth = generate_dataset(cfg)
    weighted = weigh_dataset(dataset)
    rows = release_weight_table(dataset, weighted)
    for row, cpv in zip(rows, truth["per_release_cpv"]):
        assert row.cpv == pytest.approx(cpv, abs=1e-12)


def test_hand_line_values():
    # slope 100 ms/WF, intercept 2000: CPVs [5, 10] put true RTs at [2500, 3000]
    for cpv, expected in [(5.0, 2500.0), (10.0, 3000.0)]:
        assert 2000.0 + 100.0 * cpv == pytest.approx(expected)


def test_same_seed_byte_identical(tmp_path):
    cfg = SimConfig(n_releases=6, noise_std_ms=25.0, seed=11)
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    write_simulated(*generate_dataset(cfg), out_a)
    write_simulated(*generate_dataset(cfg), out_b)
    for name in ("backlog.json", "releases.json", "truth.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_different_seeds_differ(tmp_path):
    data_a, _ = generate_dataset(SimConfig(seed=1, noise_std_ms=10.0))
    data_b, _ = generate_dataset(SimConfig(seed=2, noise_std_ms=10.0))
    assert data_a != data_b


def test_env_schedule_adjusts_measured_rts():
    env_slow = EnvironmentSpec(clock_ghz=1.8)
    env_fast = EnvironmentSpec(clock_ghz=2.4)
    cfg = SimConfig(
        n_releases=6, noise_std_ms=0.0, seed=5, env=env_slow,
        env_schedule={3: env_fast},
    )
    dataset, truth = generate_dataset(cfg)
    factor = 1 - 1.227 * (2.4 - 1.8) / 1.8
    for i, (release, cpv) in enumerate(zip(dataset.releases, truth["per_release_cpv"])):
        base = 2000.0 + 100.0 * cpv
        expected = base * factor if i >= 3 else base
        assert mean_rt(release) == pytest.approx(expected, abs=1e-9)
        assert release.env == (env_fast if i >= 3 else env_slow)


def test_env_schedule_matches_env_multipliers_path():
    env64 = EnvironmentSpec(os_bits=64, clock_ghz=1.8)
    env32 = EnvironmentSpec(os_bits=32, clock_ghz=2.0)
    cfg = SimConfig(n_releases=5, noise_std_ms=0.0, seed=6, env=env64,
                    env_schedule={2: env32}, os_factor=1.3)
    dataset, truth = generate_dataset(cfg)
    adj = EnvAdjustment(os_factor_32_over_64=1.3)
    envs = [r.env for r in dataset.releases]
    multipliers = env_multipliers(envs, env64, adj)
    for release, cpv, m in zip(dataset.releases, truth["per_release_cpv"], multipliers):
        assert mean_rt(release) == pytest.approx((2000.0 + 100.0 * cpv) * m, abs=1e-9)


def test_severity_mix_validation():
    with pytest.raises(ValidationError):
        SimConfig(severity_mix=(0.5, 0.5, 0.5, 0.5))
    with pytest.raises(ValidationError):
        SimConfig(n_releases=2)
    with pytest.raises(ValidationError):
        SimConfig(noise_std_ms=-1.0)


def test_truth_sidecar_fields(tmp_path):
    cfg = SimConfig(n_releases=4, seed=7, os_factor=1.4)
    dataset, truth = generate_dataset(cfg)
    paths = write_simulated(dataset, truth, tmp_path)
    import json

    stored = json.loads(paths["truth"].read_text())
    assert stored["slope"] == cfg.slope_ms_per_wf
    assert stored["intercept"] == cfg.intercept_ms
    assert stored["os_factor"] == 1.4
    assert len(stored["per_release_cpv"]) == 4


def test_noise_never_nonpositive():
    cfg = SimConfig(n_releases=5, slope_ms_per_wf=0.1, intercept_ms=10.0,
                    noise_std_ms=50.0, seed=13)
    dataset, _ = generate_dataset(cfg)
    for release in dataset.releases:
        assert all(rt > 0 for rt in release.rt_runs_ms)
