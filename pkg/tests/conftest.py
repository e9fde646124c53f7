"""
Shared fixtures
"""
import random

import pytest

from hcx.acstruct import example_structures, padded_fixture, swap_structure
from hcx.liealg import su2, su2_power


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def fixtures():
    J, J_prime = example_structures()
    return {"J": J, "J'": J_prime}


@pytest.fixture(scope="session")
def padded(fixtures):
    """J + J on su(2)^4"""
    return padded_fixture(fixtures["J"])


@pytest.fixture(scope="session")
def swap():
    return swap_structure()


@pytest.fixture(scope="session")
def g1():
    return su2()


@pytest.fixture(scope="session")
def g2():
    return su2_power(2)


@pytest.fixture(scope="session")
def g4():
    return su2_power(4)
