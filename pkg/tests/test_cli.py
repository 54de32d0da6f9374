import csv

import pytest

from aoicache.cli import main
from aoicache.config import dump_config, load_config
from aoicache.qtable import QTable


@pytest.fixture
def small_config(tmp_path, desk):
    path = tmp_path / "small.yaml"
    dump_config(desk.replace(t_max=200_000, eval_runs=10, progress_every=50_000,
                             sweep_mode="single_table"), path)
    return path


def read(path):
    return list(csv.reader(open(path)))


def test_train_writes_table_and_progress(tmp_path, small_config):
    out = tmp_path / "train"
    assert main(["train", "--config", str(small_config), "--seed", "3", "--out", str(out)]) == 0
    table = QTable.load(out / "qtable.bin", load_config(small_config))
    assert table.iteration == 200_000 and table.seed == 3
    rows = read(out / "progress.csv")
    assert rows[0] == ["iteration", "epsilon", "mean_reward", "probe_discounted_return"]
    assert [int(r[0]) for r in rows[1:]] == [50_000, 100_000, 150_000, 200_000]
    assert load_config(out / "config.yaml").seed == 3
    assert (out / "derived.json").exists()


def test_train_resume(tmp_path, small_config):
    out = tmp_path / "resume"
    main(["train", "--config", str(small_config), "--out", str(out)])
    full = (out / "qtable.bin").read_bytes()
    # an interrupted run leaves a checkpoint; resuming from it completes the same table
    from aoicache.learner import train
    config = load_config(small_config)
    train(config, config.seed, stop_at=120_000).save(out / "qtable.bin")
    main(["train", "--config", str(small_config), "--out", str(out), "--resume"])
    assert (out / "qtable.bin").read_bytes() == full


def test_evaluate_with_saved_table(tmp_path, small_config):
    out = tmp_path / "ev"
    main(["train", "--config", str(small_config), "--out", str(out)])
    main(["evaluate", "--config", str(small_config), "--out", str(out),
          "--qtable", str(out / "qtable.bin"), "--policy", "eau", "--policy", "zero_wait",
          "--policy", "periodic:2"])
    rows = read(out / "evaluate.csv")
    assert [r[0] for r in rows[1:]] == ["eau", "zero_wait", "periodic:2"]
    assert rows[1][1] == "10"


def test_sweep_and_convergence(tmp_path, small_config):
    out = tmp_path / "sw"
    main(["sweep", "--config", str(small_config), "--out", str(out), "--betas", "1,4"])
    rows = read(out / "sweep.csv")
    assert rows[0][:4] == ["beta1", "policy", "mode", "runs"]
    assert "mean_discounted_aoi_s" in rows[0] and "mean_discounted_energy_mJ" in rows[0]
    assert len(rows) == 5
    main(["convergence", "--config", str(small_config), "--out", str(out), "--grid", "1e3,1e4"])
    rows = read(out / "convergence.csv")
    assert [r[0] for r in rows[1:]] == ["1000", "10000"]


def test_replay(tmp_path, small_config):
    out = tmp_path / "rp"
    main(["replay", "--config", str(small_config), "--out", str(out), "--slots", "25",
          "--policy", "periodic:2"])
    rows = read(out / "trace.csv")
    assert len(rows) == 26
    assert [r[6] for r in rows[1:5]] == ["1", "0", "1", "0"]


def test_builtin_scenario_name(tmp_path):
    out = tmp_path / "b"
    main(["replay", "--config", "tiny", "--out", str(out), "--slots", "3"])
    assert read(out / "trace.csv")[0][:3] == ["slot", "aoi_ecn", "aoi_user_1"]
