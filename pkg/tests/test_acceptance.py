"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test records a ``PASS``/``FAIL`` verdict line (shown in the pytest
terminal summary and printed with ``-s``) before asserting.
"""
import filecmp
import itertools
import statistics
import time

import numpy as np
import pytest

from chanalloc import harness
from chanalloc.baselines import chromatic_number, greedy_first_fit, is_proper
from chanalloc.gga import crossover, mutate
from chanalloc.gica import (
    IcaParams,
    assimilate,
    inject_groups,
    random_assignment,
    repair,
    revolve,
    run as gica_run,
)
from chanalloc.model import (
    Assignment,
    conflict_edges,
    conflict_sum,
    cost,
    f1,
    f2,
    fractional_interference,
    max_reuse,
    mean_interference_power,
    reuse_efficiency,
)
from chanalloc.netgen import ConflictGraph
from conftest import ACCEPTANCE, random_graph
from oracles import direct_metrics, small_graphs

pytestmark = pytest.mark.slow


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def _inversions(curve: list[float]) -> int:
    return sum(b > a for a, b in zip(curve, curve[1:]))


# --- 1. feasibility on 75-node networks ------------------------------------------

def test_feasibility_75_nodes():
    cfg = harness.ExperimentConfig(scenario="fig6_8", objective="multi", n_seeds=50)
    t0 = time.perf_counter()
    rows = harness.collect_runs(cfg)
    elapsed = time.perf_counter() - t0
    parts, ok = [], elapsed < 120.0
    for method in ("gica", "gga"):
        for tr in (100.0, 200.0, 300.0):
            cell = [r for r in rows if r["method"] == method and r["tr"] == tr]
            assert len(cell) == 50
            share = sum(r["frac_interf"] == 0 for r in cell) / len(cell)
            ok &= share >= 0.95
            parts.append(f"{method}@{tr:g}={share:.0%}")
    verdict(1, ok, f"zero-interference share {' '.join(parts)}; runtime {elapsed:.0f}s (< 120s)")
    assert ok


# --- 2. reuse efficiency and channel counts at TR 300 ----------------------------

def test_table_ranges_tr300():
    rows = harness.collect_runs(harness.ExperimentConfig(scenario="table1", methods=("gica",),
                                                         n_seeds=20))
    parts, ok = [], True
    for n in (100, 200, 300):
        cell = [r for r in rows if r["n_nodes"] == n]
        eff = statistics.fmean(r["reuse_eff"] for r in cell)
        used = statistics.fmean(r["used_channels"] for r in cell)
        ok &= 1.5 <= eff <= 2.1 and 2.0 <= used <= 4.5
        parts.append(f"n={n}: eff={eff:.2f} used={used:.2f}")
    verdict(2, ok, "; ".join(parts) + " (want eff in [1.5, 2.1], used in [2, 4.5])")
    assert ok


# --- 3. optimal channel count on small graphs ------------------------------------

def test_oracle_equivalence_small_graphs():
    rng = np.random.default_rng(2024)
    hits = total = 0
    for k in range(200):
        n = int(rng.integers(2, 11))
        g = random_graph(rng, n, float(rng.uniform(0.2, 0.8)))
        chi = chromatic_number(g)
        res = gica_run(g, chi, IcaParams(objective="multi", seed=k, max_iterations=200))
        a = res.assignment
        hits += conflict_edges(a, g) == 0 and a.used_channels == chi
        total += 1
    share = hits / total
    ok = share >= 0.90
    verdict(3, ok, f"{hits}/{total} graphs solved with exactly chi channels ({share:.1%}, want >= 90%)")
    assert ok


# --- 4 and 5 share the 300-node / TR 150 instances --------------------------------

@pytest.fixture(scope="module")
def convergence_runs():
    cfg = harness.ExperimentConfig(scenario="fig9_convergence", objective="multi", n_seeds=20)
    return harness.collect_runs(cfg)


def test_convergence_ordering(convergence_runs):
    by = {m: {r["seed"]: r for r in convergence_runs if r["method"] == m} for m in ("gica", "gga")}
    assert by["gica"].keys() == by["gga"].keys() and len(by["gica"]) >= 20
    seeds = sorted(by["gica"])
    med = {m: statistics.median(by[m][s]["iterations_to_converge"] for s in seeds) for m in by}
    clusters = statistics.fmean(by["gica"][s]["clusters"] for s in seeds)
    ok = med["gica"] < med["gga"]
    verdict(4, ok, f"median iterations-to-stagnation GICA={med['gica']:g} vs GGA={med['gga']:g} "
                   f"over {len(seeds)} paired seeds, mean {clusters:.1f} clusters (want GICA < GGA)")
    assert ok


def test_interference_power_gap(convergence_runs):
    gaps = []
    for r in convergence_runs:
        if r["method"] != "gica":
            continue
        net, cl, g = harness.build_instance(r["n_nodes"], r["tr"], r["seed"])
        baseline = Assignment.from_province((1,) * g.n_clusters, r["n_available"])
        gaps.append(mean_interference_power(baseline, g) - r["mean_power_dbm"])
    worst = min(gaps)
    ok = len(gaps) >= 20 and worst >= 3.0
    verdict(5, ok, f"GICA below all-one-channel baseline on {sum(x > 0 for x in gaps)}/{len(gaps)} "
                   f"seeds, smallest gap {worst:.1f} dB (want >= 3 dB on every seed)")
    assert ok


# --- 6. exploitation-rate sweep ----------------------------------------------------

def test_exploitation_sweep():
    cfg = harness.ExperimentConfig(scenario="fig10_sweep", n_seeds=20, rates=(0.05, 0.1, 0.3, 0.5))
    med = harness.sweep_medians(harness.sweep_rows(cfg))
    parts, ok = [], True
    for method, curve in sorted(med.items()):
        values = [curve[r] for r in cfg.rates]
        inv = _inversions(values)
        ok &= inv <= 1
        parts.append(f"{method} {'/'.join(f'{v:g}' for v in values)} ({inv} inversion(s))")
    verdict(6, ok, "medians at rates 0.05/0.1/0.3/0.5: " + "; ".join(parts) + " (want <= 1 each)")
    assert ok


# --- 7. property suites --------------------------------------------------------------

def _closure_violations(n_ops: int = 10_000) -> int:
    rng = np.random.default_rng(7)
    ops = ("assimilate", "inject", "revolve_remove", "revolve_add", "crossover", "mutate", "repair")
    bad = 0
    done = 0
    while done < n_ops:
        n = int(rng.integers(1, 13))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        n_av = int(rng.integers(1, n + 2))
        for _ in range(50):
            a = random_assignment(n, n_av, rng)
            b = random_assignment(n, n_av, rng)
            op = ops[int(rng.integers(len(ops)))]
            try:
                if op == "assimilate":
                    out = assimilate(b, a, g, rng)
                elif op == "inject":
                    k = int(rng.integers(1, len(b.resource) + 1))
                    out = inject_groups(a, b, [int(c) for c in rng.permutation(b.resource)[:k]], g)
                elif op == "revolve_remove":
                    out = revolve(a, "remove", g, n_av, rng)
                elif op == "revolve_add":
                    out = revolve(a, "add", g, n_av, rng)
                elif op == "crossover":
                    out = crossover(a, b, g, rng)
                elif op == "mutate":
                    out = mutate(a, g, rng)
                else:
                    prov = list(a.province)
                    holes = rng.random(n) < 0.5
                    prov = [0 if h else c for c, h in zip(prov, holes)]
                    out = Assignment.from_province(repair(prov, a.resource, g), n_av)
                Assignment(out.province, out.resource, out.n_available)
                if (len(out.province) != n or out.n_available != n_av
                        or set(out.province) != set(out.resource)):
                    bad += 1
            except ValueError:
                bad += 1
            done += 1
    return bad


def _identity_violations() -> int:
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(500):
        n = int(rng.integers(1, 15))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        a = random_assignment(n, int(rng.integers(1, n + 2)), rng)
        bad += not np.isclose(reuse_efficiency(a) * a.used_channels, n)
        proper = greedy_first_fit(g, g.max_degree + 1)
        bad += f2(proper, g) != f1(proper)
    return bad


def _brute_force_mismatches() -> tuple[int, int]:
    checked = bad = 0
    for n, edges in small_graphs(6):
        g = ConflictGraph.from_edges(n, edges)
        for k in (1, 2, 3):
            for prov in itertools.product(range(1, k + 1), repeat=n):
                a = Assignment.from_province(prov, k)
                d = direct_metrics(prov, edges, k)
                got = (a.used_channels, conflict_edges(a, g), conflict_sum(a, g), max_reuse(a),
                       f1(a), reuse_efficiency(a), fractional_interference(a, g))
                want = (d["used"], d["conflicts"], d["conflict_sum"], d["max_reuse"], d["f1"],
                        d["reuse_eff"], d["frac"])
                ok = all(np.isclose(x, y) for x, y in zip(got, want))
                ok &= np.isclose(f2(a, g), d["f2"]) and np.isclose(cost(a, g, "multi"), d["f2"])
                bad += not ok
                checked += 1
    return checked, bad


def _deterministic(tmp_path) -> bool:
    outs = []
    for tag in ("a", "b"):
        cfg = harness.ExperimentConfig(scenario="custom", n_nodes=60, tx_range=200.0, n_seeds=2,
                                       output_dir=str(tmp_path / tag), histories=True,
                                       gga={"max_iterations": 40}, ica={"max_iterations": 40})
        outs.append(harness.run_experiment(cfg))
    a, b = outs
    same = all(filecmp.cmp(a[k], b[k], shallow=False) for k in ("runs", "aggregate", "assignments"))
    hist = sorted(p.name for p in a["histories"].iterdir())
    _, mismatch, errors = filecmp.cmpfiles(a["histories"], b["histories"], hist, shallow=False)
    return same and not mismatch and not errors and bool(hist)


def _sandwich_violations() -> int:
    rng = np.random.default_rng(13)
    bad = 0
    for _ in range(300):
        n = int(rng.integers(1, 13))
        g = random_graph(rng, n, float(rng.uniform(0.1, 0.9)))
        greedy = greedy_first_fit(g, g.max_degree + 1)
        chi = chromatic_number(g)
        bad += not (is_proper(g, greedy.province)
                    and chi <= greedy.used_channels <= g.max_degree + 1)
    return bad


def test_property_suites(tmp_path):
    closure = _closure_violations()
    identities = _identity_violations()
    checked, brute = _brute_force_mismatches()
    deterministic = _deterministic(tmp_path)
    sandwich = _sandwich_violations()
    ok = closure == 0 and identities == 0 and brute == 0 and deterministic and sandwich == 0
    verdict(7, ok, f"closure violations {closure}/10000; identity violations {identities}; "
                   f"brute-force mismatches {brute}/{checked}; byte-identical reruns {deterministic}; "
                   f"greedy sandwich violations {sandwich}")
    assert ok
