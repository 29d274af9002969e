"""Channel allocation for clustered ad hoc networks with a grouping
imperialist competitive algorithm (GICA), plus GGA and greedy baselines."""
from .baselines import chromatic_number, greedy_first_fit
from .gga import GgaParams, gga_run
from .gica import IcaParams, RunHistory, RunResult, run
from .gica import run as gica_run
from .model import (
    Assignment,
    MetricsReport,
    PathLossParams,
    evaluate,
    f1,
    f2,
    format_assignment,
    fractional_interference,
    mean_interference_power,
    parse_assignment,
    reuse_efficiency,
)
from .netgen import (
    Clustering,
    ConflictGraph,
    Network,
    build_conflict_graph,
    generate_network,
    lid_clustering,
)

__version__ = "0.1.0"
