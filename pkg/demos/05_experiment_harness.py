"""
Batch experiments and the rate sweep
====================================

"""
import json
import tempfile
from pathlib import Path

from chanalloc.harness import ExperimentConfig, load_runs, parse_config_text, config_from_mapping, \
    run_experiment, sweep_exploitation

out = Path(tempfile.mkdtemp())

# configs are plain "key = value" text; flags on the command line override them
cfg = config_from_mapping(parse_config_text(f"""
scenario = custom
n_nodes = 100
tr = 250
seeds = 3
methods = gica, gga, greedy
max_iterations = 60
out = {out / 'batch'}
"""))
paths = run_experiment(cfg)
for row in load_runs(paths["runs"]):
    print(row["method"], row["objective"], row["used_channels"], round(row["reuse_eff"], 2))

summary = json.loads(paths["aggregate"].read_text())
print(len(summary), "aggregate rows, e.g.", summary[0])

# the sweep varies the revolution (GICA) and mutation (GGA) rates
cfg = ExperimentConfig(scenario="custom", n_nodes=100, tx_range=250.0, n_seeds=2,
                       rates=(0.1, 0.5), output_dir=str(out / "sweep"), ica={"max_iterations": 60},
                       gga={"max_iterations": 60})
print(json.loads(sweep_exploitation(cfg)["medians"].read_text()))
