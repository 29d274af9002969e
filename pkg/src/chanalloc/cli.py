"""Command line entry point: ``chanalloc {gen,cluster,solve,experiment,sweep}``."""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys

from . import harness
from .model import evaluate, format_assignment
from .netgen import (
    build_conflict_graph,
    generate_network,
    lid_clustering,
    read_graph,
    read_network,
    write_graph,
    write_network,
)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _load_graph(args):
    if args.graph:
        with open(args.graph) as fh:
            return read_graph(fh)
    with open(args.network) as fh:
        net = read_network(fh)
    return build_conflict_graph(net, lid_clustering(net), args.multiplier)


def cmd_gen(args):
    net = generate_network(args.n_nodes, args.area, args.tx_range, args.seed)
    with _output(args.out) as fh:
        write_network(net, fh)


def cmd_cluster(args):
    with open(args.network) as fh:
        net = read_network(fh)
    cl = lid_clustering(net)
    g = build_conflict_graph(net, cl, args.multiplier)
    with _output(args.out) as fh:
        for node in sorted(cl.membership):
            fh.write(f"member {node} {cl.membership[node]}\n")
        for node in sorted(cl.gateways):
            fh.write(f"gateway {node}\n")
        write_graph(g, fh)


def cmd_solve(args):
    g = _load_graph(args)
    n_av = args.n_available or g.max_degree + 1
    ica = {k: v for k, v in dict(revolution_rate=args.revolution_rate, power_form=args.power_form,
                                 assimilate=args.assimilate, max_iterations=args.max_iterations).items()
           if v is not None}
    gga = {k: v for k, v in dict(mutation_rate=args.mutation_rate,
                                 max_iterations=args.max_iterations).items() if v is not None}
    a, hist = harness.solve(args.method, g, n_av, args.objective, args.seed, ica, gga)
    m = evaluate(a, g)
    print(format_assignment(a))
    print(f"# clusters={g.n_clusters} n_available={n_av} used_channels={m.used_channels} "
          f"reuse_eff={m.reuse_efficiency:.4g} frac_interf={m.fractional_interference:.4g} "
          f"conflicts={m.conflicts} mean_power_dbm={m.mean_interference_power:.4g}")
    if hist is not None and args.history:
        with _output(args.history) as fh:
            hist.write_csv(fh)


_CONFIG_FLAGS = ("scenario", "n_nodes", "tx_range", "n_available", "methods", "objective",
                 "seeds", "out", "jobs", "master_seed", "revolution_rate", "mutation_rate",
                 "max_iterations", "power_form", "assimilate", "rates", "multiplier")


def _config(args, defaults=None) -> harness.ExperimentConfig:
    overrides = {k: getattr(args, k, None) for k in _CONFIG_FLAGS}
    overrides["conflict_multiplier"] = overrides.pop("multiplier")
    return harness.load_config(args.config, overrides, defaults)


def cmd_experiment(args):
    paths = harness.run_experiment(_config(args))
    for name, p in paths.items():
        print(f"{name}: {p}")


def cmd_sweep(args):
    cfg = _config(args, defaults={"scenario": "fig10_sweep"})
    paths = harness.sweep_exploitation(cfg)
    for name, p in paths.items():
        print(f"{name}: {p}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chanalloc", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a random network fixture")
    p.add_argument("--n-nodes", type=int, required=True)
    p.add_argument("--area", type=float, default=1000.0)
    p.add_argument("--tx-range", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="LID clustering and conflict graph of a fixture")
    p.add_argument("--network", required=True)
    p.add_argument("--multiplier", type=float, default=2.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("solve", help="run one method on one fixture")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network")
    src.add_argument("--graph")
    p.add_argument("--multiplier", type=float, default=2.0)
    p.add_argument("--method", choices=harness.METHODS, default="gica")
    p.add_argument("--objective", choices=("single", "multi"), default="multi")
    p.add_argument("--n-available", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--revolution-rate", type=float)
    p.add_argument("--mutation-rate", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--power-form", choices=("standard", "paper"))
    p.add_argument("--assimilate", choices=("weakest", "all"))
    p.add_argument("--history", help="write the run history CSV here")
    p.set_defaults(func=cmd_solve)

    for name, func, help_ in (("experiment", cmd_experiment, "run a scenario batch"),
                              ("sweep", cmd_sweep, "revolution/mutation rate grid")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key = value config file; flags override it")
        p.add_argument("--scenario", choices=sorted(harness.SCENARIOS))
        p.add_argument("--n-nodes", type=int)
        p.add_argument("--tx-range", type=float)
        p.add_argument("--n-available", type=int)
        p.add_argument("--methods", help="comma separated subset of gica,gga,greedy")
        p.add_argument("--objective", choices=("single", "multi", "both"))
        p.add_argument("--seeds", type=int)
        p.add_argument("--master-seed", type=int)
        p.add_argument("--out")
        p.add_argument("--jobs", type=int)
        p.add_argument("--multiplier", type=float)
        p.add_argument("--revolution-rate", type=float)
        p.add_argument("--mutation-rate", type=float)
        p.add_argument("--max-iterations", type=int)
        p.add_argument("--power-form", choices=("standard", "paper"))
        p.add_argument("--assimilate", choices=("weakest", "all"))
        p.add_argument("--rates", help="comma separated rate grid (sweep)")
        p.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (OSError, ValueError, harness.InvariantError) as exc:
        print(f"chanalloc: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
