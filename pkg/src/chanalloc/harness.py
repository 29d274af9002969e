"""Seeded batch experiments over random networks, with CSV/JSON reports.

Scenarios
---------
``fig6_8``            75 nodes, transmission range 100/200/300 m, GICA and GGA,
                      single- and multi-objective.
``table1``            100/200/300 nodes at 300 m, GICA, GGA and greedy.
``fig9_convergence``  300 nodes at 150 m (about 30 clusters), per-iteration
                      histories for GICA and GGA.
``fig10_sweep``       the 30-cluster instance under a grid of revolution and
                      mutation rates.
``custom``            ``n_nodes`` / ``tx_range`` taken from the config.
"""
from __future__ import annotations

import csv
import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .baselines import greedy_first_fit
from .gga import GgaParams, gga_run
from .gica import IcaParams, RunHistory, run as gica_run
from .model import Assignment, PathLossParams, evaluate, format_assignment, parse_assignment
from .netgen import build_conflict_graph, generate_network, lid_clustering

log = logging.getLogger(__name__)

RUN_FIELDS = (
    "seed", "n_nodes", "tr", "method", "objective", "clusters", "used_channels",
    "reuse_eff", "frac_interf", "mean_power_dbm", "iterations_to_converge",
)
METRICS = ("clusters", "used_channels", "reuse_eff", "frac_interf", "mean_power_dbm",
           "iterations_to_converge")
SWEEP_FIELDS = ("method", "rate", "seed", "n_nodes", "tr", "clusters", "used_channels",
                "conflicts", "iterations_to_converge")
METHODS = ("gica", "gga", "greedy")
NO_OBJECTIVE = "-"

SCENARIOS: dict[str, dict[str, Any]] = {
    "fig6_8": dict(cases=[(75, 100.0), (75, 200.0), (75, 300.0)],
                   methods=("gica", "gga"), objectives=("single", "multi")),
    "table1": dict(cases=[(100, 300.0), (200, 300.0), (300, 300.0)],
                   methods=("gica", "gga", "greedy"), objectives=("multi",)),
    "fig9_convergence": dict(cases=[(300, 150.0)], methods=("gica", "gga"),
                             objectives=("single", "multi"), histories=True),
    "fig10_sweep": dict(cases=[(300, 150.0)], methods=("gica", "gga"), objectives=("multi",)),
    "custom": dict(cases=None, methods=("gica", "gga", "greedy"), objectives=("multi",)),
}
SWEEP_RATES = (0.05, 0.1, 0.2, 0.3, 0.5)


class InvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "custom"
    n_nodes: int | None = None
    tx_range: float | None = None
    n_available: int | None = None
    methods: tuple[str, ...] | None = None
    objective: str | None = None  # single, multi or both; None = scenario default
    n_seeds: int = 20
    master_seed: int = 0
    output_dir: str = "results"
    area_side: float = 1000.0
    conflict_multiplier: float = 2.0
    jobs: int = 1
    histories: bool | None = None
    rates: tuple[float, ...] = SWEEP_RATES
    ica: dict = field(default_factory=dict)
    gga: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {sorted(SCENARIOS)}")
        if self.n_seeds < 1:
            raise ValueError("n_seeds must be >= 1")
        if self.methods is not None:
            if not self.methods:
                raise ValueError("select at least one method")
            bad = set(self.methods) - set(METHODS)
            if bad:
                raise ValueError(f"unknown methods {sorted(bad)}")
        if self.objective not in (None, "single", "multi", "both"):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.scenario == "custom" and (self.n_nodes is None or self.tx_range is None):
            raise ValueError("custom scenario needs n_nodes and tx_range")

    @property
    def cases(self) -> list[tuple[int, float]]:
        preset = SCENARIOS[self.scenario]["cases"]
        if preset is None or self.n_nodes is not None or self.tx_range is not None:
            base = preset or [(self.n_nodes, self.tx_range)]
            return sorted({(self.n_nodes or n, float(self.tx_range or tr)) for n, tr in base})
        return list(preset)

    @property
    def method_list(self) -> tuple[str, ...]:
        return tuple(self.methods or SCENARIOS[self.scenario]["methods"])

    @property
    def objectives(self) -> tuple[str, ...]:
        if self.objective is None:
            return SCENARIOS[self.scenario]["objectives"]
        return ("single", "multi") if self.objective == "both" else (self.objective,)

    @property
    def keep_histories(self) -> bool:
        if self.histories is not None:
            return self.histories
        return SCENARIOS[self.scenario].get("histories", False)


def derive_seed(master: int, *keys: int) -> int:
    """Counter-based child seed: a pure function of the master seed and keys."""
    return int(np.random.SeedSequence([master, *keys]).generate_state(1, np.uint32)[0])


def _method_code(method: str, objective: str) -> int:
    return METHODS.index(method) * 2 + (objective == "multi")


def solve(method: str, g, n_available: int, objective: str = "multi", seed: int | None = None,
          ica: dict | None = None, gga: dict | None = None,
          pathloss: PathLossParams | None = None) -> tuple[Assignment, RunHistory | None]:
    if method == "gica":
        res = gica_run(g, n_available, IcaParams(**{**(ica or {}), "objective": objective, "seed": seed}),
                       pathloss)
        return res.assignment, res.history
    if method == "gga":
        res = gga_run(g, n_available, GgaParams(**{**(gga or {}), "objective": objective, "seed": seed}),
                      pathloss)
        return res.assignment, res.history
    if method == "greedy":
        return greedy_first_fit(g, n_available), None
    raise ValueError(f"unknown method {method!r}")


def build_instance(n_nodes: int, tx_range: float, seed: int, area_side: float = 1000.0,
                   multiplier: float = 2.0):
    net = generate_network(n_nodes, area_side, tx_range, seed)
    cl = lid_clustering(net)
    return net, cl, build_conflict_graph(net, cl, multiplier)


def _check(a: Assignment, g, context: str) -> None:
    try:
        if len(a.province) != g.n_clusters:
            raise ValueError(f"province length {len(a.province)} != {g.n_clusters} clusters")
        Assignment(a.province, a.resource, a.n_available)
    except ValueError as exc:
        raise InvariantError(f"{context}: {exc}\n  {format_assignment(a)}") from exc


@dataclass(frozen=True)
class _Task:
    cfg: ExperimentConfig
    n_nodes: int
    tx_range: float
    index: int


def _run_task(task: _Task) -> list[dict]:
    cfg = task.cfg
    seed = derive_seed(cfg.master_seed, task.n_nodes, int(round(task.tx_range)), task.index)
    net, cl, g = build_instance(task.n_nodes, task.tx_range, seed, cfg.area_side,
                                cfg.conflict_multiplier)
    n_av = cfg.n_available or g.max_degree + 1
    out = []
    for method in cfg.method_list:
        objectives = (NO_OBJECTIVE,) if method == "greedy" else cfg.objectives
        for objective in objectives:
            run_seed = derive_seed(seed, _method_code(method, objective))
            a, hist = solve(method, g, n_av, objective if objective != NO_OBJECTIVE else "multi",
                            run_seed, cfg.ica, cfg.gga)
            _check(a, g, f"{method}/{objective} seed={seed}")
            m = evaluate(a, g)
            out.append(dict(
                seed=seed, n_nodes=task.n_nodes, tr=task.tx_range, method=method,
                objective=objective, clusters=g.n_clusters, used_channels=m.used_channels,
                reuse_eff=m.reuse_efficiency, frac_interf=m.fractional_interference,
                mean_power_dbm=m.mean_interference_power,
                iterations_to_converge=hist.iterations_to_converge if hist else "",
                n_available=n_av, conflicts=m.conflicts,
                assignment=format_assignment(a),
                history=hist if cfg.keep_histories else None,
            ))
    return out


def _map(fn, tasks: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def _sort_key(row: dict):
    return (row["n_nodes"], row["tr"], row["seed"], row["method"], row["objective"])


def collect_runs(cfg: ExperimentConfig) -> list[dict]:
    """Run every (case, seed, method, objective) combination; rows come back
    sorted regardless of worker scheduling."""
    tasks = [_Task(cfg, n, tr, i) for n, tr in cfg.cases for i in range(cfg.n_seeds)]
    rows = [r for batch in _map(_run_task, tasks, cfg.jobs) for r in batch]
    return sorted(rows, key=_sort_key)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_runs(rows: Iterable[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RUN_FIELDS)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in RUN_FIELDS])


def load_runs(path) -> list[dict]:
    """Read a runs CSV back into typed rows."""
    ints = {"seed", "n_nodes", "clusters", "used_channels"}
    floats = {"tr", "reuse_eff", "frac_interf", "mean_power_dbm"}
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            row: dict[str, Any] = dict(rec)
            for k in ints:
                row[k] = int(row[k])
            for k in floats:
                row[k] = float(row[k])
            it = row["iterations_to_converge"]
            row["iterations_to_converge"] = int(it) if it != "" else ""
            rows.append(row)
    return rows


def aggregate(rows: Iterable[dict], scenario: str) -> list[dict]:
    """Mean and (sample) standard deviation per scenario/method/objective/case
    and metric. Depends only on the columns written to the runs CSV."""
    groups: dict[tuple, list[dict]] = {}
    for r in rows:
        groups.setdefault((r["method"], r["objective"], r["n_nodes"], r["tr"]), []).append(r)
    out = []
    for (method, objective, n_nodes, tr), grp in sorted(groups.items()):
        for metric in METRICS:
            vals = [float(r[metric]) for r in grp if r[metric] != ""]
            vals = [v for v in vals if not math.isnan(v)]
            if not vals:
                continue
            out.append(dict(
                scenario=scenario, method=method, objective=objective, n_nodes=n_nodes, tr=tr,
                metric=metric, n_runs=len(vals), mean=statistics.fmean(vals),
                std=statistics.stdev(vals) if len(vals) > 1 else 0.0,
            ))
    return out


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_experiment(cfg: ExperimentConfig) -> dict[str, Path]:
    """Run a scenario batch and write its report files.

    Returns the paths written: ``runs`` (per-run CSV), ``aggregate`` (JSON),
    ``assignments`` (one validated assignment line per run) and, when
    histories are kept, ``histories`` (directory of per-run CSVs).
    """
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    rows = collect_runs(cfg)
    paths = {"runs": out / "runs.csv", "aggregate": out / "aggregate.json",
             "assignments": out / "assignments.txt"}
    write_runs(rows, paths["runs"])
    _write_json(aggregate(rows, cfg.scenario), paths["aggregate"])
    with open(paths["assignments"], "w") as fh:
        fh.write("# seed n_nodes tr method objective n_available | channels are 1-based\n")
        for r in rows:
            fh.write(f"{r['seed']} {r['n_nodes']} {r['tr']!r} {r['method']} {r['objective']} "
                     f"{r['n_available']} {r['assignment']}\n")
    if cfg.keep_histories:
        hdir = out / "histories"
        hdir.mkdir(exist_ok=True)
        for r in rows:
            if r["history"] is None:
                continue
            name = f"{r['method']}_{r['objective']}_n{r['n_nodes']}_tr{r['tr']:g}_seed{r['seed']}.csv"
            with open(hdir / name, "w", newline="") as fh:
                r["history"].write_csv(fh)
        paths["histories"] = hdir
    log.info("wrote %d runs to %s", len(rows), out)
    return paths


def load_assignments(path) -> list[tuple[dict, Assignment]]:
    """Parse an assignments file, re-validating every line."""
    out = []
    with open(path) as fh:
        for line in fh:
            if not line.strip() or line.startswith("#"):
                continue
            seed, n_nodes, tr, method, objective, n_av, rest = line.split(maxsplit=6)
            meta = dict(seed=int(seed), n_nodes=int(n_nodes), tr=float(tr), method=method,
                        objective=objective)
            out.append((meta, parse_assignment(rest, int(n_av))))
    return out


# --- exploitation-rate sweep ---------------------------------------------------

@dataclass(frozen=True)
class _SweepTask:
    cfg: ExperimentConfig
    n_nodes: int
    tx_range: float
    index: int
    method: str
    rate: float


def _run_sweep_task(task: _SweepTask) -> dict:
    cfg = task.cfg
    seed = derive_seed(cfg.master_seed, task.n_nodes, int(round(task.tx_range)), task.index)
    _, _, g = build_instance(task.n_nodes, task.tx_range, seed, cfg.area_side, cfg.conflict_multiplier)
    n_av = cfg.n_available or g.max_degree + 1
    objective = cfg.objectives[-1]
    ica = {**cfg.ica, "revolution_rate": task.rate}
    gga = {**cfg.gga, "mutation_rate": task.rate}
    a, hist = solve(task.method, g, n_av, objective, derive_seed(seed, _method_code(task.method, objective)),
                    ica, gga)
    _check(a, g, f"sweep {task.method} rate={task.rate} seed={seed}")
    m = evaluate(a, g)
    return dict(method=task.method, rate=task.rate, seed=seed, n_nodes=task.n_nodes, tr=task.tx_range,
                clusters=g.n_clusters, used_channels=m.used_channels, conflicts=m.conflicts,
                iterations_to_converge=hist.iterations_to_converge)


def sweep_rows(cfg: ExperimentConfig) -> list[dict]:
    methods = [m for m in cfg.method_list if m in ("gica", "gga")]
    if not methods:
        raise ValueError("the sweep needs gica and/or gga")
    tasks = [_SweepTask(cfg, n, tr, i, m, r)
             for n, tr in cfg.cases for m in methods for r in cfg.rates for i in range(cfg.n_seeds)]
    rows = _map(_run_sweep_task, tasks, cfg.jobs)
    return sorted(rows, key=lambda r: (r["method"], r["rate"], r["n_nodes"], r["tr"], r["seed"]))


def sweep_medians(rows: Iterable[dict]) -> dict[str, dict[float, float]]:
    """Median iterations-to-stagnation per method and rate."""
    cells: dict[tuple[str, float], list[int]] = {}
    for r in rows:
        cells.setdefault((r["method"], r["rate"]), []).append(r["iterations_to_converge"])
    out: dict[str, dict[float, float]] = {}
    for (method, rate), vals in sorted(cells.items()):
        out.setdefault(method, {})[rate] = float(statistics.median(vals))
    return out


def sweep_exploitation(cfg: ExperimentConfig) -> dict[str, Path]:
    """Grid over revolution rate (GICA) / mutation rate (GGA)."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = sweep_rows(cfg)
    paths = {"sweep": out / "sweep.csv", "medians": out / "sweep.json"}
    with open(paths["sweep"], "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_FIELDS)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in SWEEP_FIELDS])
    medians = sweep_medians(rows)
    _write_json({"scenario": cfg.scenario,
                 "median_iterations_to_converge": {m: {repr(k): v for k, v in d.items()}
                                                   for m, d in medians.items()}},
                paths["medians"])
    return paths


# --- config files --------------------------------------------------------------

_LIST_KEYS = {"methods": str, "rates": float}
_SCALAR = {f.name: f.type for f in fields(ExperimentConfig)}
_ALIASES = {"seeds": "n_seeds", "out": "output_dir", "tr": "tx_range"}
_ICA_KEYS = {"n_countries", "n_imperialists", "revolution_rate", "power_form", "assimilate",
             "zeta", "stall_iterations"}
_GGA_KEYS = {"population", "crossover_rate", "mutation_rate", "tournament_size"}


def parse_config_text(text: str) -> dict[str, Any]:
    """Flat ``key = value`` lines; ``#`` starts a comment. Keys may use dashes."""
    out: dict[str, Any] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {n}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(value: str, kind: str):
    if kind.startswith("int"):
        return int(value)
    if kind.startswith("float"):
        return float(value)
    if kind.startswith("bool"):
        return value.lower() in ("1", "true", "yes", "on")
    return value


def config_from_mapping(values: dict[str, Any]) -> ExperimentConfig:
    """Build a config from string (or already-typed) values, routing engine
    parameters into the ``ica``/``gga`` override dictionaries."""
    kw: dict[str, Any] = {}
    ica: dict[str, Any] = {}
    gga: dict[str, Any] = {}
    for key, value in values.items():
        if value is None:
            continue
        key = _ALIASES.get(key, key)
        if key in _LIST_KEYS:
            if isinstance(value, str):
                value = [_LIST_KEYS[key](v) for v in value.replace(",", " ").split()]
            kw[key] = tuple(value)
        elif key == "max_iterations":
            ica[key] = gga[key] = int(value)
        elif key in _ICA_KEYS:
            ica[key] = _coerce(str(value), "str" if key in ("power_form", "assimilate") else
                               "float" if key in ("revolution_rate", "zeta") else "int")
        elif key in _GGA_KEYS:
            gga[key] = _coerce(str(value), "float" if key.endswith("rate") else "int")
        elif key in _SCALAR:
            kw[key] = _coerce(value, str(_SCALAR[key])) if isinstance(value, str) else value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ExperimentConfig(**kw, ica=ica, gga=gga)


def load_config(path, overrides: dict[str, Any] | None = None,
                defaults: dict[str, Any] | None = None) -> ExperimentConfig:
    """Defaults, then the config file, then non-None overrides (CLI flags)."""
    values: dict[str, Any] = dict(defaults or {})
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc}") from exc
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return config_from_mapping(values)
