import numpy as np
import pytest

from euciso import catalog
from euciso.groups import build_quotient


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def spec(name):
    return catalog.get(name)


def quotient(name, N):
    return build_quotient(catalog.get(name), N)
