import numpy as np
import pytest

from drwave.space import new_space


@pytest.fixture(scope="session")
def space21():
    return new_space(2, 1)


@pytest.fixture(scope="session")
def space43():
    return new_space(4, 3)


@pytest.fixture(scope="session")
def space81():
    return new_space(8, 1)


@pytest.fixture(scope="session")
def all_spaces(space21, space43, space81):
    return [space21, space43, space81]


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
