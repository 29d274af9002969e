"""Greedy first-fit allocation and an exact chromatic number oracle."""
from __future__ import annotations

from .model import Assignment
from .netgen import ConflictGraph

__all__ = ["greedy_first_fit", "chromatic_number", "is_proper", "MAX_EXACT_VERTICES"]

MAX_EXACT_VERTICES = 16


def greedy_first_fit(g: ConflictGraph, n_available: int) -> Assignment:
    """Give each vertex, in index order, the lowest channel no colored
    neighbor uses. When every channel is blocked the vertex takes the one
    with the fewest clashing neighbors (lowest index on ties)."""
    if n_available < 1:
        raise ValueError("n_available must be >= 1")
    prov = [0] * g.n_clusters
    for q, nb in enumerate(g.neighbors):
        clash = {}
        for v in nb:
            if prov[v]:
                clash[prov[v]] = clash.get(prov[v], 0) + 1
        prov[q] = min(range(1, n_available + 1), key=lambda c: (clash.get(c, 0), c))
    return Assignment.from_province(prov, n_available)


def is_proper(g: ConflictGraph, colors) -> bool:
    return all(colors[p] != colors[q] for p, q in g.edges)


def _colorable(nbrs, order, k: int) -> bool:
    colors = [0] * len(nbrs)

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        taken = {colors[u] for u in nbrs[v]}
        # symmetry breaking: never open more than one fresh color at a time
        for c in range(1, min(k, used + 1) + 1):
            if c in taken:
                continue
            colors[v] = c
            if place(i + 1, max(used, c)):
                return True
        colors[v] = 0
        return False

    return place(0, 0)


def chromatic_number(g: ConflictGraph, limit: int | None = None) -> int | None:
    """Smallest ``k <= limit`` admitting a proper coloring, by backtracking.

    Returns ``None`` when no ``k <= limit`` works. Graphs above 16 vertices
    are rejected.
    """
    n = g.n_clusters
    if n > MAX_EXACT_VERTICES:
        raise ValueError(f"exact search limited to {MAX_EXACT_VERTICES} vertices, got {n}")
    limit = n if limit is None else limit
    if n == 0:
        return 0
    nbrs = g.neighbors
    order = sorted(range(n), key=lambda v: -len(nbrs[v]))
    lower = 2 if g.edges else 1
    if lower == 1 and limit >= 1:
        return 1
    for k in range(lower, limit + 1):
        if _colorable(nbrs, order, k):
            return k
    return None
