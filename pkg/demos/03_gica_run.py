"""
One GICA run on a clustered network
===================================

"""
from chanalloc import IcaParams, evaluate, format_assignment, gica_run
from chanalloc.harness import build_instance

net, cl, g = build_instance(200, 200.0, seed=5)
n_available = g.max_degree + 1
print(g.n_clusters, "clusters,", n_available, "channels available")

# 50 countries split into 6 empires; revolution happens with probability 0.3
params = IcaParams(objective="multi", seed=1)
res = gica_run(g, n_available, params)

print(format_assignment(res.assignment))
print(evaluate(res.assignment, g))
print("stagnated after", res.history.iterations_to_converge, "iterations;",
      "last improvement at", res.history.last_improvement)

# the per-iteration trace of the best country; show only the improvements
prev = None
for it, cost, used, conflicts, dbm in res.history.rows():
    if cost != prev:
        print(f"{it:4d}  cost={cost:.4f}  channels={used}  conflicts={conflicts}  power={dbm:.1f} dBm")
    prev = cost
