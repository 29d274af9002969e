"""Random ad hoc network snapshots, Lowest-ID clustering and the cluster-head
conflict graph.

A network is a set of nodes dropped uniformly at random on a square field;
two nodes hear each other when their distance is at most the transmission
range (unit-disk model, identical omnidirectional radios).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

__all__ = [
    "Network",
    "Clustering",
    "ConflictGraph",
    "generate_network",
    "lid_clustering",
    "build_conflict_graph",
    "write_network",
    "read_network",
    "write_graph",
    "read_graph",
]


@dataclass(frozen=True, eq=False)
class Network:
    """Node positions (meters) on a square field of side ``area_side``."""

    positions: np.ndarray
    tx_range: float
    area_side: float

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float).reshape(-1, 2)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        if self.tx_range <= 0:
            raise ValueError(f"tx_range must be positive, got {self.tx_range}")
        if self.area_side <= 0:
            raise ValueError(f"area_side must be positive, got {self.area_side}")
        if len(pos) and (pos.min() < 0 or pos.max() > self.area_side):
            raise ValueError("node coordinates must lie in [0, area_side]")

    @property
    def n_nodes(self) -> int:
        return len(self.positions)

    @property
    def nodes(self) -> list[tuple[int, float, float]]:
        return [(i, float(x), float(y)) for i, (x, y) in enumerate(self.positions)]

    @cached_property
    def distances(self) -> np.ndarray:
        diff = self.positions[:, None, :] - self.positions[None, :, :]
        return np.sqrt((diff ** 2).sum(axis=-1))

    @cached_property
    def in_range(self) -> np.ndarray:
        """Boolean neighbor matrix (no self loops)."""
        adj = self.distances <= self.tx_range
        np.fill_diagonal(adj, False)
        return adj

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.tx_range == other.tx_range
            and self.area_side == other.area_side
            and np.array_equal(self.positions, other.positions)
        )


@dataclass(frozen=True)
class Clustering:
    cluster_heads: tuple[int, ...]
    membership: dict[int, int]
    gateways: frozenset[int] = field(default_factory=frozenset)

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_heads)

    def members(self, head: int) -> list[int]:
        return sorted(n for n, h in self.membership.items() if h == head)


@dataclass(frozen=True, eq=False)
class ConflictGraph:
    """Undirected graph over cluster heads.

    Vertex ``p`` stands for the cluster headed by node ``head_ids[p]``; an edge
    forbids the two clusters from sharing a channel. ``positions`` holds the
    head coordinates when the graph was built from a network, and is needed
    only for interference-power estimates.
    """

    adjacency: np.ndarray
    head_ids: tuple[int, ...] = None
    positions: np.ndarray | None = None

    def __post_init__(self):
        y = np.array(self.adjacency, dtype=np.int8)
        if y.ndim != 2 or y.shape[0] != y.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {y.shape}")
        if not np.array_equal(y, y.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(y) != 0):
            raise ValueError("adjacency must have a zero diagonal")
        if np.any((y != 0) & (y != 1)):
            raise ValueError("adjacency must be 0/1")
        y.setflags(write=False)
        object.__setattr__(self, "adjacency", y)
        heads = tuple(range(len(y))) if self.head_ids is None else tuple(self.head_ids)
        if len(heads) != len(y):
            raise ValueError("head_ids length must equal the number of vertices")
        object.__setattr__(self, "head_ids", heads)
        if self.positions is not None:
            pos = np.array(self.positions, dtype=float).reshape(-1, 2)
            pos.setflags(write=False)
            object.__setattr__(self, "positions", pos)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], **kwargs) -> "ConflictGraph":
        y = np.zeros((n, n), dtype=np.int8)
        for p, q in edges:
            y[p, q] = y[q, p] = 1
        return cls(y, **kwargs)

    @property
    def n_clusters(self) -> int:
        return len(self.adjacency)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(np.flatnonzero(row).tolist()) for row in self.adjacency)

    @cached_property
    def mask(self) -> np.ndarray:
        return self.adjacency.astype(bool)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoints of every edge, ``p < q``."""
        return np.nonzero(np.triu(self.adjacency))

    @property
    def edges(self) -> list[tuple[int, int]]:
        p, q = self.edge_arrays
        return list(zip(p.tolist(), q.tolist()))

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n_clusters else 0


def generate_network(n_nodes: int, area_side: float = 1000.0, tx_range: float = 200.0,
                     seed: int | None = None) -> Network:
    """Drop ``n_nodes`` nodes i.i.d. uniformly on ``[0, area_side]^2``."""
    if n_nodes < 1:
        raise ValueError(f"n_nodes must be >= 1, got {n_nodes}")
    if area_side <= 0 or tx_range <= 0:
        raise ValueError("area_side and tx_range must be positive")
    rng = np.random.default_rng(seed)
    return Network(rng.uniform(0.0, area_side, size=(n_nodes, 2)), float(tx_range), float(area_side))


def lid_clustering(net: Network) -> Clustering:
    """Lowest-ID clustering, simulated in synchronous rounds.

    In each round every undecided node whose id is lower than the ids of all
    its undecided neighbors declares itself cluster head; undecided neighbors
    of the new heads then join the lowest-id head in range.
    """
    adj = net.in_range
    n = net.n_nodes
    decided = np.zeros(n, dtype=bool)
    membership: dict[int, int] = {}
    heads: list[int] = []
    while not decided.all():
        undecided = np.flatnonzero(~decided)
        new_heads = []
        for v in undecided:
            nb = np.flatnonzero(adj[v] & ~decided)
            if nb.size == 0 or v < nb.min():
                new_heads.append(int(v))
        for h in new_heads:
            decided[h] = True
            membership[h] = h
        for v in undecided:
            if decided[v]:
                continue
            in_range_heads = [h for h in new_heads if adj[v, h]]
            if in_range_heads:
                membership[int(v)] = min(in_range_heads)
                decided[v] = True
        heads.extend(new_heads)

    heads.sort()
    head_arr = np.array(heads)
    gateways = frozenset(
        v for v in range(n)
        if membership[v] != v and int(adj[v, head_arr].sum()) >= 2
    )
    return Clustering(tuple(heads), membership, gateways)


def build_conflict_graph(net: Network, cl: Clustering, multiplier: float = 2.0) -> ConflictGraph:
    """Join two cluster heads when they are within ``multiplier * tx_range``.

    Heads that close can have overlapping clusters, so giving them the same
    channel causes intra-cluster co-channel interference.
    """
    heads = np.array(cl.cluster_heads, dtype=int)
    d = net.distances[np.ix_(heads, heads)]
    y = (d <= multiplier * net.tx_range).astype(np.int8)
    np.fill_diagonal(y, 0)
    return ConflictGraph(y, tuple(heads.tolist()), net.positions[heads])


# --- text fixtures -----------------------------------------------------------

def write_network(net: Network, fh: TextIO) -> None:
    fh.write(f"nodes {net.n_nodes} area {net.area_side!r} tr {net.tx_range!r}\n")
    for i, x, y in net.nodes:
        fh.write(f"node {i} {x!r} {y!r}\n")


def read_network(fh: TextIO) -> Network:
    header = None
    rows: dict[int, tuple[float, float]] = {}
    for line in fh:
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "nodes":
            header = dict(zip(parts[2::2], parts[3::2]))
            n = int(parts[1])
        elif parts[0] == "node":
            rows[int(parts[1])] = (float(parts[2]), float(parts[3]))
    if header is None:
        raise ValueError("missing 'nodes <n> area <side> tr <range>' header")
    if sorted(rows) != list(range(n)):
        raise ValueError(f"expected node ids 0..{n - 1}")
    return Network([rows[i] for i in range(n)], float(header["tr"]), float(header["area"]))


def write_graph(g: ConflictGraph, fh: TextIO) -> None:
    """Serialize a conflict graph as ``clusters``/``head``/``edge`` lines."""
    fh.write(f"clusters {g.n_clusters}\n")
    for p, h in enumerate(g.head_ids):
        if g.positions is not None:
            x, y = map(float, g.positions[p])
            fh.write(f"head {p} {h} {x!r} {y!r}\n")
        else:
            fh.write(f"head {p} {h}\n")
    for p, q in g.edges:
        fh.write(f"edge {p} {q}\n")


def read_graph(fh: TextIO) -> ConflictGraph:
    n = None
    heads: dict[int, int] = {}
    pos: dict[int, tuple[float, float]] = {}
    edges = []
    for line in fh:
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "clusters":
            n = int(parts[1])
        elif parts[0] == "head":
            heads[int(parts[1])] = int(parts[2])
            if len(parts) >= 5:
                pos[int(parts[1])] = (float(parts[3]), float(parts[4]))
        elif parts[0] == "edge":
            edges.append((int(parts[1]), int(parts[2])))
    if n is None:
        n = len(heads) if heads else 1 + max((max(e) for e in edges), default=-1)
    head_ids = tuple(heads.get(p, p) for p in range(n))
    positions = [pos[p] for p in range(n)] if len(pos) == n and n else None
    return ConflictGraph.from_edges(n, edges, head_ids=head_ids, positions=positions)
