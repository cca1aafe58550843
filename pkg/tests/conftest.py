import numpy as np
import pytest
from hypothesis import settings

from rqrao.graph import Graph

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def square():
    """4-cycle with unit weights; maximum cut 4."""
    return Graph(range(4), [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)])


@pytest.fixture
def triangle():
    return Graph(range(3), [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
