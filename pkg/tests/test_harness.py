import csv
import io
import json

import pytest

from rai.algorithms import RunResult
from rai.harness import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    load_config,
    preset_configs,
    reproduce,
    row_key,
    run_experiment,
    synthetic_config,
    verify_output,
    write_csv,
)
from rai.instance import build_instance
from rai.harness import SYNTHETIC_MEANS, SYNTHETIC_SIZES


def result(outputs):
    return RunResult(tuple(tuple(o) for o in outputs), 0, (), 0, True)


def test_verify_output(synthetic):
    best = build_instance(SYNTHETIC_MEANS, SYNTHETIC_SIZES, (1, 0, 0))
    assert verify_output(result([[0], [], []]), best)
    assert verify_output(result([[2], [], []]), best)  # any top-cluster arm will do
    assert not verify_output(result([[3], [], []]), best)
    assert verify_output(result([[1, 2], [3, 7], []]), synthetic)
    assert not verify_output(result([[1, 2], [2, 8], []]), synthetic)
    unfinished = RunResult(((0,), (), ()), 0, (), 0, False)
    assert not verify_output(unfinished, best)


def test_single_replication_summary():
    cfg = synthetic_config(1, "vanilla", replications=1, seed=3)
    summary, records = run_experiment(cfg)
    assert summary.mean == records[0].total_pulls
    assert summary.std == 0.0 and summary.min == summary.max == records[0].total_pulls
    assert summary.errors == 0 and summary.error_rate == 0.0
    assert records[0].correct


def test_same_seed_same_summary():
    cfg = synthetic_config(3, "butterscotch", replications=3, seed=11)
    a, ra = run_experiment(cfg)
    b, rb = run_experiment(cfg)
    assert a == b
    assert [r.pulls for r in ra] == [r.pulls for r in rb]


def test_summary_mean_matches_records():
    cfg = synthetic_config(5, "lucb", replications=4, seed=1)
    summary, records = run_experiment(cfg)
    assert summary.mean == sum(r.total_pulls for r in records) / 4
    assert summary.upper_bound is None
    assert summary.merging is False


def test_row_key_pairs_algorithms(synthetic):
    assert row_key(synthetic, "bernoulli") == row_key(synthetic, "bernoulli")
    assert row_key(synthetic, "bernoulli") != row_key(synthetic, "gaussian-half")
    other = build_instance(SYNTHETIC_MEANS, SYNTHETIC_SIZES, (1, 0, 0))
    assert row_key(synthetic, "bernoulli") != row_key(other, "bernoulli")


def test_budget_abort_is_flagged():
    cfg = synthetic_config(2, "vanilla", replications=2, pull_budget=1000)
    summary, records = run_experiment(cfg)
    assert summary.aborted == 2
    assert all(r.aborted and not r.terminated for r in records)


@pytest.mark.parametrize(
    "data",
    [
        {"cluster_sizes": [1, 1], "required": [1, 0]},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1]},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0], "algorithm": "ucb"},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0], "delta": 1.5},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0], "replications": 0},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0], "colour": "red"},
        {"means": [0.5, 0.1], "task": "best-arm", "required": [1, 0]},
        {"means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0], "family": "empirical"},
        {"means": [0.5, 0.1], "task": "top-k", "params": {"k": 1, "z": 2}},
    ],
)
def test_config_errors(data):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(data)


def test_config_task_params_and_roundtrip():
    cfg = ExperimentConfig.from_dict({
        "means": list(SYNTHETIC_MEANS), "task": "coarse-ranking",
        "params": {"ratios": "3:5:2"}, "replications": 2,
    })
    inst, env = cfg.resolve()
    assert inst.sizes == (3, 5, 2) and inst.required == (3, 5, 2)
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_config_bad_instance():
    cfg = ExperimentConfig.from_dict({"means": [0.1, 0.5], "cluster_sizes": [1, 1], "required": [1, 0]})
    with pytest.raises(ConfigError):
        cfg.resolve()
    cfg = ExperimentConfig.from_dict({"means": [0.5, 0.1], "task": "best-arm", "n": 3})
    with pytest.raises(ConfigError):
        cfg.resolve()


def test_empirical_atoms_config():
    cfg = ExperimentConfig.from_dict({
        "means": [0.5, 0.1], "cluster_sizes": [1, 1], "required": [1, 0],
        "family": "empirical", "atoms": [[0.0, 1.0], [0.1]], "replications": 2,
    })
    summary, _ = run_experiment(cfg)
    assert summary.errors == 0


def test_load_example_configs(tmp_path):
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "configs"
    cfg = load_config(root / "synthetic_coarse.json")
    assert cfg.algorithm == "butterscotch" and cfg.required == (2, 2, 0)
    ml = load_config(root / "movielens_fixture.json")
    inst, env = ml.resolve()
    assert inst.sizes == (5, 5) and inst.required == (2, 0) and env.family == "empirical"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")


def test_csv_header_and_rows():
    summary, _ = run_experiment(synthetic_config(1, "butterscotch", replications=2))
    buf = io.StringIO()
    write_csv([summary], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == CSV_HEADER
    row = next(csv.DictReader(io.StringIO(buf.getvalue())))
    assert row["c"] == "3:5:2" and row["r"] == "1:0:0"
    assert float(row["mean_pulls"]) == 10370.0
    assert float(row["upper_bound"]) == pytest.approx(summary.butterscotch_upper)


def test_preset_shapes(ratings_path):
    assert len(preset_configs("table2")) == 15
    assert len(preset_configs("table3")) == 20
    assert len(preset_configs("movielens-fig2", ratings=ratings_path, ns=[10])) == 18
    assert len(preset_configs("movielens-fig2", ratings=ratings_path)) == 90
    with pytest.raises(ConfigError):
        preset_configs("movielens-fig2")
    with pytest.raises(ConfigError):
        preset_configs("table9")


def test_fig2_params():
    cfgs = preset_configs("movielens-fig2", ratings="x.csv", ns=[20])
    mk = next(c for c in cfgs if c.task == "m-of-top-k")
    assert (mk.n, mk.k, mk.m, mk.ratios) == (20, 10, 4, (3, 5, 2))


def test_reproduce_writes_manifest(tmp_path, monkeypatch):
    import rai.harness as h

    small = [synthetic_config(1, "butterscotch", replications=2, preset="table2")]
    monkeypatch.setattr(h, "preset_configs", lambda *a, **k: small)
    out = reproduce("table2", replications=2, seed=0, out=tmp_path)
    assert out.csv_path.read_text().splitlines()[0] == CSV_HEADER
    manifest = json.loads(out.manifest_path.read_text())
    rerun = ExperimentConfig.from_dict(manifest["rows"][0]["config"])
    again, _ = run_experiment(rerun)
    assert again.totals == out.summaries[0].totals
