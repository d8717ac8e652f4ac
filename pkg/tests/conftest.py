import numpy as np
import pytest

from virtual_aperture.core import RisArray, Scene, Target
from virtual_aperture.signal import ChirpParams

LAMBDA = 2.5e-3
D_HALF = LAMBDA / 2


@pytest.fixture
def far_scene():
    ris = RisArray((3.0, 4.0), 16, D_HALF)
    return Scene((2.0, 2.0), ris, (Target((4.0, 2.0)),))


@pytest.fixture
def near_scene():
    ris = RisArray((1.0, 3.0), 128, D_HALF)
    return Scene((0.0, 0.0), ris, (Target((3.0, 1.0)),))


@pytest.fixture
def small_chirp():
    # same sweep as the reference chirp, fewer fast-time samples
    return ChirpParams(num_samples=64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
