import numpy as np
import pytest

from teleport_channels.states import ResourceSpec


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_spec(rng, kind):
    return ResourceSpec(kind, tuple(rng.dirichlet(np.ones(4))))
