import pytest

from percolator import PercolationModel, exact_all, random_states

from gen import build, erdos_renyi_edges, newman_watts_edges


@pytest.fixture(scope="session")
def er1000():
    """The shared 1000-vertex random graph with random states."""
    graph = build(erdos_renyi_edges(1000, 0.01, seed=42))
    states = random_states(graph.n, seed=7)
    return graph, PercolationModel(states)


@pytest.fixture(scope="session")
def er1000_exact(er1000):
    graph, model = er1000
    return exact_all(graph, model)


@pytest.fixture(scope="session")
def smallworld5k():
    """5000-vertex small-world graph; only distances are needed from it."""
    graph = build(newman_watts_edges(5000, 6, 0.1, seed=11))
    states = random_states(graph.n, seed=13)
    return graph, PercolationModel(states)
