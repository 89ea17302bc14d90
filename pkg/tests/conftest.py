import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_rgb(rng):
    """A 64x48 random RGB image."""
    return rng.integers(0, 256, size=(48, 64, 3), dtype=np.uint8)
