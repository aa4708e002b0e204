import pytest

from hyperuni.generators import bary_tree, path_graph
from hyperuni.space import build_space


@pytest.fixture(scope="session")
def path100():
    return path_graph(100)


@pytest.fixture(scope="session")
def tree28():
    return bary_tree(2, 8)


@pytest.fixture(scope="session")
def square():
    return build_space([("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)])
