import itertools

import numpy as np
import pytest

from chanalloc.netgen import ConflictGraph


def complete(n):
    return ConflictGraph.from_edges(n, itertools.combinations(range(n), 2))


def path(n):
    return ConflictGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(rng, n, p):
    up = np.triu(rng.random((n, n)) < p, 1)
    return ConflictGraph((up | up.T).astype(int))


@pytest.fixture
def triangle():
    return complete(3)


@pytest.fixture
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return ConflictGraph.from_edges(10, outer + spokes + inner)


# One verdict line per acceptance criterion, echoed in the terminal summary.
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
