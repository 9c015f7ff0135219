import itertools

import pytest

from clusterdd.graph import WeightedGraph, generate_instance


def enumerate_optimum(g: WeightedGraph) -> int:
    """Plain subset enumeration; independent of every solver path."""
    best = 0
    for r in range(g.n + 1):
        for subset in itertools.combinations(range(g.n), r):
            if all(v not in g_adj_set(g, u) for u, v in itertools.combinations(subset, 2)):
                best = max(best, sum(g.weights[v] for v in subset))
    return best


def g_adj_set(g, u):
    return {v for v in range(g.n) if g.adj[u] >> v & 1}


def path3(weights=(2, 5, 2)):
    return WeightedGraph.from_edges(3, [(0, 1), (1, 2)], weights)


def complete(n, weights):
    return WeightedGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], weights)


def edgeless(weights):
    return WeightedGraph.from_edges(len(weights), [], weights)


def random_graphs(count, n_range, densities, seed0=0):
    out = []
    for i in range(count):
        n = n_range[i % len(n_range)]
        d = densities[i % len(densities)]
        out.append(generate_instance(n, d, seed0 + i))
    return out


@pytest.fixture
def p3():
    return path3()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
