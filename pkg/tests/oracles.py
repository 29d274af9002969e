"""Independent reference computations used to check the library.

Nothing here imports the code under test beyond plain data access; every
quantity is recounted from the province sequence and an edge list.
"""
import itertools
from collections import Counter

import networkx as nx


def direct_metrics(province, edges, n_available):
    n = len(province)
    used = len(set(province))
    mono = [(u, v) for u, v in edges if province[u] == province[v]]
    ordered = 2 * len(mono)
    c_max = max(Counter(province).values())
    f1 = used / (n_available * n)
    hit = {u for e in mono for u in e}
    with_nbr = {u for e in edges for u in e}
    return dict(
        used=used,
        conflicts=len(mono),
        conflict_sum=ordered,
        max_reuse=c_max,
        f1=f1,
        f2=f1 + ordered / c_max,
        reuse_eff=n / used,
        frac=len(hit) / len(with_nbr) if with_nbr else 0.0,
    )


def small_graphs(max_nodes):
    """Every graph on up to ``max_nodes`` vertices, up to isomorphism."""
    for g in nx.graph_atlas_g():
        if 1 <= g.number_of_nodes() <= max_nodes:
            yield g.number_of_nodes(), sorted(tuple(sorted(e)) for e in g.edges())


def brute_chromatic(n, edges):
    for k in range(1, n + 1):
        for colors in itertools.product(range(k), repeat=n):
            if all(colors[u] != colors[v] for u, v in edges):
                return k
    return 0


def assimilate_by_steps(imp_prov, imp_res, col_prov, col_res, channel):
    """Literal four-step assimilation for cases with no displaced clusters:
    inject, overwrite, drop orphaned resources."""
    res = [channel] + [r for r in col_res if r != channel]
    prov = list(col_prov)
    for q, c in enumerate(imp_prov):
        if c == channel:
            prov[q] = channel
    res = [r for r in res if r in prov]
    return prov, res
