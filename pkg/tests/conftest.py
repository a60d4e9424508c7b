"""
Shared fixtures for the test suite.
"""

import pytest

from src.chlrr.memo import memo_manager
from src.graphs.core import Graph, complete_graph, cycle_graph, path_graph, star_graph

C5_EXPRESSION = "join(1,3; u(ren(3,2; join(2,3; u(join(1,2; u(a:1,b:2)), join(1,3; u(c:3,d:1))))), e:3))"

P5_EXPRESSION = (
    "join(1,2; u(ren(1,3; join(1,2; u(ren(2,3; join(1,2; u(ren(1,3; join(1,2; u(a:1, b:2))), c:1))), d:2))), e:1))"
)


@pytest.fixture(autouse=True)
def clean_memo_store():
    """Every test starts and ends without a shared memo store."""
    memo_manager.close()
    yield
    memo_manager.close()


@pytest.fixture
def c5() -> Graph:
    return cycle_graph(5)


@pytest.fixture
def p4() -> Graph:
    return path_graph(4)


@pytest.fixture
def p5() -> Graph:
    return path_graph(5)


@pytest.fixture
def k3() -> Graph:
    return complete_graph(3)


@pytest.fixture
def k4() -> Graph:
    return complete_graph(4)


@pytest.fixture
def claw() -> Graph:
    return star_graph(3)


@pytest.fixture
def rotated_c5() -> Graph:
    return cycle_graph(5).permuted([1, 2, 3, 4, 0])


# two triangles 0-1-2 and 3-4-5 joined by the matching 0-5, 1-3, 2-4
PRISM_EDGES = [(0, 1), (0, 2), (0, 5), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 5)]


@pytest.fixture
def prism() -> Graph:
    return Graph(6, PRISM_EDGES)
