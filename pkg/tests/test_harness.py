import json

import pytest

from chanalloc import harness
from chanalloc.harness import (
    ExperimentConfig,
    aggregate,
    derive_seed,
    load_assignments,
    load_config,
    load_runs,
    parse_config_text,
    run_experiment,
    sweep_exploitation,
    sweep_rows,
)
from chanalloc.model import Assignment, fractional_interference
from chanalloc.netgen import build_conflict_graph, generate_network, lid_clustering

FAST = {"max_iterations": 30}


def small_cfg(tmp_path, **kw):
    base = dict(scenario="custom", n_nodes=60, tx_range=200.0, n_seeds=2,
                output_dir=str(tmp_path), ica=FAST, gga=FAST)
    base.update(kw)
    return ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="nope")
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="custom")
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="table1", methods=())
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="table1", methods=("sa",))
    with pytest.raises(ValueError):
        ExperimentConfig(scenario="table1", n_seeds=0)


def test_scenario_presets():
    cfg = ExperimentConfig(scenario="fig6_8")
    assert cfg.cases == [(75, 100.0), (75, 200.0), (75, 300.0)]
    assert cfg.objectives == ("single", "multi")
    assert ExperimentConfig(scenario="table1", tx_range=250).cases == [
        (100, 250.0), (200, 250.0), (300, 250.0)]
    assert ExperimentConfig(scenario="fig9_convergence").keep_histories


def test_derive_seed_is_pure():
    assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)
    assert derive_seed(0, 1, 2) != derive_seed(0, 2, 1)
    assert derive_seed(1, 1, 2) != derive_seed(0, 1, 2)


def test_run_experiment_outputs(tmp_path):
    paths = run_experiment(small_cfg(tmp_path))
    rows = load_runs(paths["runs"])
    assert len(rows) == 2 * 3
    assert paths["runs"].read_text().splitlines()[0] == ",".join(harness.RUN_FIELDS)
    assert {r["method"] for r in rows} == {"gica", "gga", "greedy"}
    assert all(r["reuse_eff"] * r["used_channels"] == pytest.approx(r["clusters"]) for r in rows)


def test_same_seed_same_bytes(tmp_path):
    a = run_experiment(small_cfg(tmp_path / "a", n_seeds=1))
    b = run_experiment(small_cfg(tmp_path / "b", n_seeds=1))
    for key in ("runs", "aggregate", "assignments"):
        assert a[key].read_bytes() == b[key].read_bytes()


def test_jobs_do_not_change_output(tmp_path):
    a = run_experiment(small_cfg(tmp_path / "a"))
    b = run_experiment(small_cfg(tmp_path / "b", jobs=2))
    assert a["runs"].read_bytes() == b["runs"].read_bytes()


def test_aggregate_recomputable_from_csv(tmp_path):
    paths = run_experiment(small_cfg(tmp_path, n_seeds=3))
    stored = json.loads(paths["aggregate"].read_text())
    again = aggregate(load_runs(paths["runs"]), "custom")
    assert json.loads(json.dumps(again)) == stored
    keys = {"scenario", "method", "objective", "n_runs", "mean", "std"}
    assert all(keys <= set(e) for e in stored)


def test_assignments_revalidate(tmp_path):
    cfg = small_cfg(tmp_path)
    paths = run_experiment(cfg)
    rows = load_runs(paths["runs"])
    loaded = load_assignments(paths["assignments"])
    assert len(loaded) == len(rows)
    for (meta, a), row in zip(loaded, rows):
        assert meta["seed"] == row["seed"] and meta["method"] == row["method"]
        net = generate_network(meta["n_nodes"], 1000, meta["tr"], meta["seed"])
        g = build_conflict_graph(net, lid_clustering(net))
        assert len(a.province) == g.n_clusters == row["clusters"]
        assert a.used_channels == row["used_channels"]
        assert fractional_interference(a, g) == pytest.approx(row["frac_interf"])


def test_histories_written(tmp_path):
    paths = run_experiment(small_cfg(tmp_path, n_seeds=1, histories=True, methods=("gica",)))
    files = list(paths["histories"].iterdir())
    assert len(files) == 1
    assert files[0].read_text().startswith("iteration,best_cost,")


def test_invariant_violation_is_reported(tmp_path, monkeypatch):
    bad = Assignment((1,), (1,), 1)
    monkeypatch.setattr(harness, "greedy_first_fit", lambda g, n: bad)
    with pytest.raises(harness.InvariantError, match="province: 1 | resource: 1"):
        run_experiment(small_cfg(tmp_path, methods=("greedy",), n_seeds=1))


def test_config_text_and_overrides(tmp_path):
    text = """
    # comment
    scenario = table1
    seeds = 4          # trailing comment
    methods = gica, greedy
    revolution-rate = 0.5
    mutation_rate = 0.2
    max-iterations = 50
    """
    assert parse_config_text(text)["revolution_rate"] == "0.5"
    p = tmp_path / "exp.cfg"
    p.write_text(text)
    cfg = load_config(p, {"seeds": 2, "out": "x"})
    assert cfg.scenario == "table1" and cfg.n_seeds == 2 and cfg.output_dir == "x"
    assert cfg.methods == ("gica", "greedy")
    assert cfg.ica == {"revolution_rate": 0.5, "max_iterations": 50}
    assert cfg.gga == {"mutation_rate": 0.2, "max_iterations": 50}
    with pytest.raises(ValueError):
        parse_config_text("no equals sign")
    with pytest.raises(ValueError):
        load_config(None, {"bogus": 1})
    with pytest.raises(OSError, match="missing.cfg"):
        load_config(tmp_path / "missing.cfg")


def test_single_cell_sweep_matches_experiment(tmp_path):
    cfg = small_cfg(tmp_path, methods=("gica", "gga"), objective="multi", rates=(0.3,),
                    ica={**FAST, "revolution_rate": 0.3}, gga={**FAST, "mutation_rate": 0.3})
    sweep = sweep_rows(cfg)
    runs = harness.collect_runs(cfg)
    got = sorted((r["method"], r["seed"], r["iterations_to_converge"], r["used_channels"]) for r in sweep)
    want = sorted((r["method"], r["seed"], r["iterations_to_converge"], r["used_channels"]) for r in runs)
    assert got == want


def test_sweep_files(tmp_path):
    cfg = small_cfg(tmp_path, methods=("gica",), rates=(0.1, 0.5), n_seeds=2)
    paths = sweep_exploitation(cfg)
    medians = json.loads(paths["medians"].read_text())["median_iterations_to_converge"]
    assert set(medians["gica"]) == {"0.1", "0.5"}
    assert len(paths["sweep"].read_text().splitlines()) == 1 + 4
