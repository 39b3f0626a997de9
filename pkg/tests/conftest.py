import os

import numpy as np
import pytest

from pyvol_constwidth.body import BodySpec

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def golden_dir():
    return GOLDEN_DIR


@pytest.fixture(params=[2, 3, 10, 100])
def spec(request):
    return BodySpec(request.param)


def random_directions(rng, count, n):
    g = rng.standard_normal((count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)
