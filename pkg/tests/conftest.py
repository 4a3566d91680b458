import numpy as np
import pytest

from hgw import generators as gen
from hgw.graph import Graph, laplacian
from hgw.spectral import eigendecompose

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def decomp(g: Graph):
    return eigendecompose(laplacian(g))


@pytest.fixture
def edge():
    return Graph.from_edges([("1", "2", 1.0)])


@pytest.fixture
def k3():
    return Graph.from_edges([("a", "b", 1), ("a", "c", 1), ("b", "c", 1)])


@pytest.fixture
def p3():
    return gen.path_graph(3)


@pytest.fixture
def s4():
    return gen.star_graph(3)


@pytest.fixture(scope="session")
def random_graphs():
    return gen.random_graph_suite(20, seed=1234)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
