import subprocess
import sys

from chanalloc.cli import main


def test_gen_cluster_solve(tmp_path, capsys):
    net = tmp_path / "net.txt"
    assert main(["gen", "--n-nodes", "40", "--tx-range", "200", "--seed", "2", "--out", str(net)]) == 0
    assert net.read_text().startswith("nodes 40 area 1000.0 tr 200.0\n")
    cl = tmp_path / "cl.txt"
    assert main(["cluster", "--network", str(net), "--out", str(cl)]) == 0
    text = cl.read_text()
    assert "member 0 0" in text and "clusters " in text
    hist = tmp_path / "h.csv"
    assert main(["solve", "--graph", str(cl), "--method", "gica", "--history", str(hist)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("province: ")
    assert "frac_interf=" in out
    assert hist.read_text().startswith("iteration,")
    assert main(["solve", "--network", str(net), "--method", "greedy"]) == 0


def test_experiment_and_sweep(tmp_path, capsys):
    out = tmp_path / "exp"
    assert main(["experiment", "--scenario", "custom", "--n-nodes", "50", "--tx-range", "200",
                 "--seeds", "1", "--max-iterations", "15", "--out", str(out)]) == 0
    assert (out / "runs.csv").exists() and (out / "aggregate.json").exists()
    cfg = tmp_path / "s.cfg"
    cfg.write_text("n-nodes = 50\ntx-range = 200\nseeds = 1\nmethods = gica\nrates = 0.1, 0.5\n"
                   "max-iterations = 15\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "sw")]) == 0
    assert (tmp_path / "sw" / "sweep.json").exists()


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["cluster", "--network", str(tmp_path / "missing.txt")]) == 1
    assert "missing.txt" in capsys.readouterr().err
    assert main(["experiment", "--scenario", "custom"]) == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "chanalloc", "--help"], capture_output=True, text=True)
    assert r.returncode == 0
    assert "experiment" in r.stdout


def test_sweep_respects_config_scenario(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("scenario = custom\nn-nodes = 40\ntx-range = 250\nseeds = 1\nmethods = gga\n"
                   "rates = 0.2\nmax-iterations = 10\n")
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "sw")]) == 0
    import json
    assert json.loads((tmp_path / "sw" / "sweep.json").read_text())["scenario"] == "custom"
