import pytest

from revspy.graphs import Graph


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@pytest.fixture
def p3() -> Graph:
    return path(3)


@pytest.fixture
def c4() -> Graph:
    return cycle(4)


@pytest.fixture
def c5() -> Graph:
    return cycle(5)


@pytest.fixture
def triangle_pendant() -> Graph:
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3)])


@pytest.fixture
def c5_plus_p2() -> Graph:
    return Graph.from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6)])
