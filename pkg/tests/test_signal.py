import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from virtual_aperture.signal import (
    ChirpParams,
    DataCube,
    SignalError,
    add_awgn,
    point_response,
    wavenumber_grid,
)


def test_wavenumber_start_and_end():
    k = wavenumber_grid(ChirpParams(), 3e8)
    assert len(k) == 1024
    assert k[0] == pytest.approx(800 * math.pi, rel=1e-15)
    assert k[0] == pytest.approx(2513.2741, abs=1e-4)
    assert k[-1] == pytest.approx(2722.7136, abs=1e-4)


def test_zero_bandwidth_is_flat():
    k = wavenumber_grid(ChirpParams(bandwidth=0.0), 3e8)
    assert np.all(k == 2 * math.pi * 120e9 / 3e8)


def test_single_sample_at_sweep_start():
    k = wavenumber_grid(ChirpParams(num_samples=1), 3e8)
    assert k.tolist() == [pytest.approx(800 * math.pi)]


def test_wavenumber_affine_and_increasing():
    k = wavenumber_grid(ChirpParams(), 3e8)
    steps = np.diff(k)
    assert np.all(steps > 0)
    assert np.max(np.abs(steps - steps.mean())) < 1e-9 * steps.mean()


def test_point_response_examples():
    assert point_response(800 * math.pi, 1.0, 1.0) == pytest.approx(1 + 0j, abs=1e-12)
    assert point_response(1234.5, 0.0, 3.0) == 3.0
    assert point_response(math.pi, 1.0, 2.0) == pytest.approx(-2 + 0j, abs=1e-15)


@given(st.floats(1, 3000), st.floats(0, 10), st.floats(0, 10), st.floats(0.1, 5))
def test_phase_additivity(k, r1, r2, a):
    lhs = point_response(k, r1 + r2, a)
    rhs = point_response(k, r1, 1.0) * point_response(k, r2, a)
    assert abs(lhs - rhs) < 1e-12 * max(1.0, k * (r1 + r2)) * a
    assert abs(abs(lhs) - a) < 1e-12 * a


def _unit_cube(i=64, m=20, seed=0):
    phase = np.random.default_rng(seed).uniform(0, 2 * np.pi, (i, m))
    return DataCube(np.exp(1j * phase), ChirpParams(num_samples=i))


def test_infinite_snr_is_identity():
    cube = _unit_cube()
    assert add_awgn(cube, math.inf, 3) is cube
    assert add_awgn(cube, None, 3) is cube


def test_noise_is_seed_deterministic():
    cube = _unit_cube()
    a = add_awgn(cube, 20, 11).samples
    b = add_awgn(cube, 20, 11).samples
    assert a.tobytes() == b.tobytes()
    assert add_awgn(cube, 20, 12).samples.tobytes() != a.tobytes()


def test_noise_variance_matches_snr():
    cube = DataCube(np.ones((1000, 1000), complex), ChirpParams(num_samples=1000))
    noise = add_awgn(cube, 20, 5).samples - cube.samples
    var = np.mean(np.abs(noise) ** 2)
    assert abs(var - 0.01) < 0.01 * 0.01
    # circular: equal split between quadratures
    assert abs(np.var(noise.real) - np.var(noise.imag)) < 0.02 * 0.005


def test_noise_difference_zero_mean():
    cube = _unit_cube(256, 40)
    diff = add_awgn(cube, 10, 1).samples - add_awgn(cube, 10, 2).samples
    sigma = math.sqrt(2 * 0.1)  # two independent draws of variance 0.1
    assert abs(diff.mean()) < 5 * sigma / math.sqrt(diff.size)


def test_zero_cube_has_no_snr():
    cube = DataCube(np.zeros((4, 2)), ChirpParams(num_samples=4))
    with pytest.raises(SignalError, match="SNR undefined for zero signal"):
        add_awgn(cube, 20, 0)


@pytest.mark.parametrize(
    "kwargs",
    [dict(carrier=0), dict(bandwidth=-1), dict(duration=0), dict(num_samples=0), dict(amplitude=0)],
)
def test_chirp_invariants(kwargs):
    with pytest.raises(SignalError):
        ChirpParams(**kwargs)


def test_chirp_rate_derived():
    assert ChirpParams().chirp_rate == pytest.approx(1e16)


def test_cube_shape_checked():
    with pytest.raises(SignalError):
        DataCube(np.zeros((5, 2)), ChirpParams(num_samples=4))
    with pytest.raises(SignalError):
        DataCube(np.full((4, 2), np.nan), ChirpParams(num_samples=4))
