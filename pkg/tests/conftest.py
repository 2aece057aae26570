import numpy as np
import pytest

from geoprofile import default_constants


@pytest.fixture(scope="session")
def consts():
    return default_constants()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260808)
