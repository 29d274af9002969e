"""Matrix formulation of the channel allocation problem, the two objective
functions and the performance metrics.

Channels are numbered from 1 (``ch_1 .. ch_N``). An assignment gives each
cluster exactly one channel.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .netgen import Clustering, ConflictGraph, Network

Objective = Literal["single", "multi"]

__all__ = [
    "Assignment",
    "PathLossParams",
    "MetricsReport",
    "to_matrix",
    "conflict_matrix",
    "constraint_satisfied",
    "max_reuse",
    "conflict_sum",
    "conflict_edges",
    "f1",
    "f2",
    "cost",
    "reuse_efficiency",
    "fractional_interference",
    "mean_interference_power",
    "evaluate",
    "format_assignment",
    "parse_assignment",
]


@dataclass(frozen=True)
class Assignment:
    """Grouping encoding of a channel allocation.

    ``province[q]`` is the channel of cluster ``q``; ``resource`` lists the
    distinct channels in use, in their permutation order.
    """

    province: tuple[int, ...]
    resource: tuple[int, ...]
    n_available: int

    def __post_init__(self):
        object.__setattr__(self, "province", tuple(map(int, self.province)))
        object.__setattr__(self, "resource", tuple(map(int, self.resource)))
        res = set(self.resource)
        if len(res) != len(self.resource):
            raise ValueError(f"resource entries must be distinct: {self.resource}")
        if res != set(self.province):
            raise ValueError(
                f"province and resource disagree: province uses {sorted(set(self.province))}, "
                f"resource is {self.resource}"
            )
        if self.resource and (min(self.resource) < 1 or max(self.resource) > self.n_available):
            raise ValueError(f"channel index outside [1, {self.n_available}]: {self.resource}")

    @classmethod
    def from_province(cls, province, n_available: int) -> "Assignment":
        """Build an assignment whose resource lists channels by first use."""
        return cls(tuple(province), tuple(dict.fromkeys(int(c) for c in province)), n_available)

    @property
    def used_channels(self) -> int:
        return len(self.resource)

    @property
    def n_clusters(self) -> int:
        return len(self.province)


def to_matrix(a: Assignment, n_clusters: int | None = None) -> np.ndarray:
    """``x[p-1, q] = 1`` iff channel ``p`` is assigned to cluster ``q``."""
    n_clusters = a.n_clusters if n_clusters is None else n_clusters
    if len(a.province) != n_clusters:
        raise ValueError(f"province has {len(a.province)} entries, expected {n_clusters}")
    prov = np.asarray(a.province, dtype=int)
    if prov.size and (prov.min() < 1 or prov.max() > a.n_available):
        raise ValueError(f"province references a channel outside [1, {a.n_available}]")
    x = np.zeros((a.n_available, n_clusters), dtype=np.int8)
    x[prov - 1, np.arange(n_clusters)] = 1
    return x


def conflict_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Conflict indicators: ``z[p, q] = y[p, q] * [p and q share a channel]``.

    ``x.T @ x`` is the same-channel indicator between clusters, so the
    element-wise product with the adjacency keeps only neighboring pairs.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if y.ndim != 2 or y.shape[0] != y.shape[1] or x.ndim != 2 or x.shape[1] != y.shape[0]:
        raise ValueError(f"shape mismatch: x {x.shape}, y {y.shape}")
    same = x.T.astype(np.int64) @ x.astype(np.int64)
    return y.astype(np.int64) * same


def constraint_satisfied(z: np.ndarray) -> bool:
    z = np.asarray(z)
    return int(z.sum() - np.trace(z)) == 0


def max_reuse(a: Assignment) -> int:
    """Number of clusters sharing the most reused channel."""
    if not a.province:
        raise ValueError("empty province")
    return max(Counter(a.province).values())


def conflict_sum(a: Assignment, g: ConflictGraph) -> int:
    """Ordered count of monochromatic neighbor pairs (each edge counts twice)."""
    p, q = g.edge_arrays
    prov = np.asarray(a.province)
    return 2 * int(np.count_nonzero(prov[p] == prov[q]))


def conflict_edges(a: Assignment, g: ConflictGraph) -> int:
    return conflict_sum(a, g) // 2


def f1(a: Assignment, n_clusters: int | None = None) -> float:
    """Used-channel count scaled by ``n_available * n_clusters``."""
    n_clusters = a.n_clusters if n_clusters is None else n_clusters
    return a.used_channels / (a.n_available * n_clusters)


def f2(a: Assignment, g: ConflictGraph) -> float:
    """``f1`` plus the conflict count weighted by ``1 / max_reuse``."""
    return f1(a, g.n_clusters) + conflict_sum(a, g) / max_reuse(a)


def cost(a: Assignment, g: ConflictGraph, objective: Objective = "multi") -> float:
    if objective == "single":
        return f1(a, g.n_clusters)
    if objective == "multi":
        return f2(a, g)
    raise ValueError(f"unknown objective {objective!r}")


def reuse_efficiency(a: Assignment, n_clusters: int | None = None) -> float:
    n_clusters = a.n_clusters if n_clusters is None else n_clusters
    if a.used_channels == 0:
        raise ZeroDivisionError("assignment uses no channels")
    return n_clusters / a.used_channels


def fractional_interference(a: Assignment, g: ConflictGraph) -> float:
    """Share of heads caught in a co-channel conflict, relative to the number
    of heads that would interfere if everyone shared one channel (the heads
    with at least one neighbor)."""
    mask = g.mask
    denom = int(mask.any(axis=1).sum())
    if denom == 0:
        return 0.0
    prov = np.asarray(a.province)
    hit = (mask & (prov[:, None] == prov[None, :])).any(axis=1)
    return int(hit.sum()) / denom


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss: ``PL(d) = ref_loss_db + 10 n log10(d / 1 m)``."""

    tx_power_dbm: float = 20.0
    exponent: float = 3.0
    ref_loss_db: float = 40.0
    noise_floor_dbm: float = -100.0
    min_distance: float = 1.0

    def received_dbm(self, d) -> np.ndarray:
        d = np.maximum(np.asarray(d, dtype=float), self.min_distance)
        return self.tx_power_dbm - self.ref_loss_db - 10.0 * self.exponent * np.log10(d)


def _mw(dbm):
    return 10.0 ** (np.asarray(dbm) / 10.0)


def _dbm(mw):
    return 10.0 * math.log10(mw)


def head_interference_mw(province, positions: np.ndarray, params: PathLossParams) -> np.ndarray:
    """Per-head co-channel interference power in mW (noise floor if none)."""
    prov = np.asarray(province)
    pos = np.asarray(positions, dtype=float)
    d = np.sqrt(((pos[:, None, :] - pos[None, :, :]) ** 2).sum(axis=-1))
    rx = _mw(params.received_dbm(d))
    same = prov[:, None] == prov[None, :]
    np.fill_diagonal(same, False)
    total = np.where(same, rx, 0.0).sum(axis=1)
    return np.where(same.any(axis=1), total, _mw(params.noise_floor_dbm))


def mean_interference_power(a: Assignment, g_or_cl, net: Network | None = None,
                            params: PathLossParams | None = None) -> float:
    """Mean co-channel interference power at the cluster heads, in dBm.

    Accepts either a ``ConflictGraph`` carrying head positions, or a
    ``Clustering`` together with its ``Network``. The mean is taken over
    linear power before converting back to dBm.
    """
    params = params or PathLossParams()
    if isinstance(g_or_cl, Clustering):
        if net is None:
            raise ValueError("a Network is required alongside a Clustering")
        positions = net.positions[list(g_or_cl.cluster_heads)]
    else:
        positions = g_or_cl.positions
        if positions is None:
            raise ValueError("conflict graph carries no head positions")
    return _dbm(float(head_interference_mw(a.province, positions, params).mean()))


@dataclass(frozen=True)
class MetricsReport:
    used_channels: int
    reuse_efficiency: float
    fractional_interference: float
    mean_interference_power: float
    conflicts: int


def evaluate(a: Assignment, g: ConflictGraph, params: PathLossParams | None = None) -> MetricsReport:
    power = mean_interference_power(a, g, params=params) if g.positions is not None else float("nan")
    return MetricsReport(
        used_channels=a.used_channels,
        reuse_efficiency=reuse_efficiency(a, g.n_clusters),
        fractional_interference=fractional_interference(a, g),
        mean_interference_power=power,
        conflicts=conflict_edges(a, g),
    )


_LINE = re.compile(r"^\s*province:\s*(?P<prov>[\d\s]*)\|\s*resource:\s*(?P<res>[\d\s]*)$")


def format_assignment(a: Assignment) -> str:
    """``province: c1 .. cN | resource: r1 .. rm`` (1-based channels)."""
    return "province: {} | resource: {}".format(
        " ".join(map(str, a.province)), " ".join(map(str, a.resource))
    )


def parse_assignment(line: str, n_available: int) -> Assignment:
    m = _LINE.match(line.strip())
    if not m:
        raise ValueError(f"malformed assignment line: {line!r}")
    prov = tuple(int(t) for t in m["prov"].split())
    res = tuple(int(t) for t in m["res"].split())
    return Assignment(prov, res, n_available)
