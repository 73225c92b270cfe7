import numpy as np
import pytest

from latpack.catalog import make_solid
from latpack.polytope import convex_hull


@pytest.fixture
def cube():
    return make_solid("cube")


@pytest.fixture
def octahedron():
    return make_solid("octahedron")


@pytest.fixture
def tetrahedron():
    return make_solid("tetrahedron")


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_hull(rng, n=20):
    return convex_hull(rng.normal(size=(n, 3)))


def pytest_terminal_summary(terminalreporter):
    import report
    ls = report.lines()
    if ls:
        terminalreporter.section("acceptance criteria")
        for line in ls:
            terminalreporter.write_line(line)
