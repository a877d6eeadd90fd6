import math

import pytest

from hifield_gates import atomic

GHZ = 2 * math.pi * 1e9


@pytest.fixture(scope="session")
def be9():
    return atomic.load_species("be9")


@pytest.fixture(scope="session")
def mg24():
    return atomic.load_species("mg24")


@pytest.fixture(scope="session")
def be_446(be9):
    return atomic.level_energies(be9, 4.46)
