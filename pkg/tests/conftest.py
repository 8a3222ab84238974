import numpy as np
import pytest

from galedemand import gale_spec, symmetric_spec
from galedemand.fields import QuadraticInverseDemand


@pytest.fixture(scope="session")
def gale():
    return gale_spec()


@pytest.fixture(scope="session")
def sym():
    return symmetric_spec()


@pytest.fixture(scope="session")
def gale_field(gale):
    return QuadraticInverseDemand.from_spec(gale)


@pytest.fixture(scope="session")
def sym_field(sym):
    return QuadraticInverseDemand.from_spec(sym)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
