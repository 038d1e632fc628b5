import numpy as np
import pytest

from plyfold import MaterialSpec


@pytest.fixture
def fig4():
    return MaterialSpec(h=1.0, L=10.0, N=8, gamma=1e-6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
