import numpy as np
import pytest

from stackcondense.cohomology import named_classes
from stackcondense.groups import preset

SMALL = ("z2", "z4", "z2xz2", "z8", "s3", "d8", "q8")


@pytest.fixture(scope="session")
def s4():
    return preset("s4")


@pytest.fixture(scope="session")
def s4_classes(s4):
    return named_classes(s4)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
