"""
Encoding an allocation and scoring it
=====================================

"""
from chanalloc import Assignment, ConflictGraph, evaluate
from chanalloc.model import conflict_matrix, f1, f2, to_matrix

# a 5-cycle needs three channels
g = ConflictGraph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])

# province: the channel of every cluster; resource: the channels in use
good = Assignment((1, 2, 1, 2, 3), (1, 2, 3), n_available=3)
bad = Assignment.from_province((1, 1, 2, 2, 1), n_available=3)

# x is channels x clusters, z keeps only the conflicting pairs
x = to_matrix(bad)
print(x)
print(conflict_matrix(x, g.adjacency))

# single objective f1 only counts channels; f2 adds a conflict penalty
for name, a in (("good", good), ("bad", bad)):
    print(name, "f1 =", round(f1(a), 4), " f2 =", round(f2(a, g), 4))

# the reported metrics
print(evaluate(good, g))
print(evaluate(bad, g))
