import pytest

from blockortho import Measure


@pytest.fixture(scope="session")
def hermite_pair():
    return Measure.gaussian(1), Measure.gaussian(2)


@pytest.fixture(scope="session")
def laguerre_pair():
    return Measure.gamma_weight(1, 1), Measure.gamma_weight(2, 1)
