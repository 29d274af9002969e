"""
Random networks, Lowest-ID clusters and the conflict graph
===========================================================

"""
import numpy as np

from chanalloc import build_conflict_graph, generate_network, lid_clustering

# 75 radios dropped on a 1000 m x 1000 m field, each with a 200 m range
net = generate_network(75, area_side=1000.0, tx_range=200.0, seed=3)
print(net.n_nodes, "nodes, first three:", net.nodes[:3])

# Lowest-ID clustering: the smallest id among undecided neighbours becomes head
cl = lid_clustering(net)
print(cl.n_clusters, "cluster heads:", cl.cluster_heads)
print("members of the first cluster:", cl.members(cl.cluster_heads[0]))
print(len(cl.gateways), "gateway nodes (members hearing two or more heads)")

# heads closer than 2 * TR may have overlapping clusters, so they conflict
g = build_conflict_graph(net, cl)
print("conflict edges:", len(g.edges), " max degree:", g.max_degree)

# a shorter range means more, smaller clusters
for tr in (100.0, 200.0, 300.0):
    counts = [lid_clustering(generate_network(75, tx_range=tr, seed=s)).n_clusters for s in range(20)]
    print(f"TR={tr:g}: mean clusters {np.mean(counts):.1f}")
