"""
GICA against the grouping GA and first-fit greedy
=================================================

"""
import numpy as np

from chanalloc import GgaParams, IcaParams, chromatic_number, evaluate, gga_run, gica_run, greedy_first_fit
from chanalloc.harness import build_instance, derive_seed

gica_it, gga_it = [], []
for k in range(5):
    net, cl, g = build_instance(300, 150.0, seed=derive_seed(0, k))
    n_av = g.max_degree + 1
    a = gica_run(g, n_av, IcaParams(seed=k))
    b = gga_run(g, n_av, GgaParams(seed=k))
    c = greedy_first_fit(g, n_av)
    gica_it.append(a.history.iterations_to_converge)
    gga_it.append(b.history.iterations_to_converge)
    print(f"{g.n_clusters} clusters | channels gica={a.assignment.used_channels} "
          f"gga={b.assignment.used_channels} greedy={c.used_channels} | "
          f"power gica={evaluate(a.assignment, g).mean_interference_power:.1f} dBm")

print("median iterations to stagnation: gica", np.median(gica_it), "gga", np.median(gga_it))

# on small graphs the exact oracle tells how far from optimal we are
_, _, small = build_instance(40, 250.0, seed=1)
print("chromatic number", chromatic_number(small), "vs gica",
      gica_run(small, small.max_degree + 1, IcaParams(seed=0)).assignment.used_channels)
