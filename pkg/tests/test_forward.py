import cmath
import math

import numpy as np
import pytest

from virtual_aperture.core import RisArray, Scene, Target, element_positions
from virtual_aperture.forward import (
    ForwardError,
    PropagationMode,
    ris_paths,
    synthesize_ris_echo,
    synthesize_sar_echo,
)
from virtual_aperture.imaging import dirichlet_profile
from virtual_aperture.ris_control import (
    HAMMING,
    RECTANGULAR,
    RisProgram,
    far_field_program,
    near_field_program,
    steering_from_trajectory,
    virtual_arc,
)
from virtual_aperture.signal import ChirpParams, wavenumber_grid


def _naive_ris_echo(radar, ris, targets, weights, k):
    """Scalar double loop, independent of the vectorised path code."""
    xs = [tuple(p) for p in element_positions(ris)]
    m_steps, n_el, _ = weights.shape
    out = np.zeros((len(k), m_steps), complex)
    for i, ki in enumerate(k):
        for m in range(m_steps):
            acc = 0j
            for t, sigma in targets:
                back = math.hypot(t[0] - radar[0], t[1] - radar[1])
                for n, x in enumerate(xs):
                    L = math.hypot(x[0] - radar[0], x[1] - radar[1]) + math.hypot(t[0] - x[0], t[1] - x[1]) + back
                    acc += sigma * weights[m, n, i] * cmath.exp(-1j * ki * L)
            out[i, m] = acc
    return out


def _unit_program(n, m=1):
    return RisProgram(np.ones((m, n)), np.zeros((m, n)), None, RECTANGULAR, None)


def test_single_element_reduces_to_point_response(small_chirp):
    ris = RisArray((3, 4), 1, 1.25e-3)
    scene = Scene((2, 2), ris, (Target((4, 2)),))
    y = synthesize_ris_echo(scene, _unit_program(1), small_chirp).samples[:, 0]
    k = wavenumber_grid(small_chirp)
    L = math.sqrt(5) + math.sqrt(5) + 2.0
    np.testing.assert_allclose(y, np.exp(-1j * k * L), rtol=0, atol=1e-12)


def test_superposition_two_targets(small_chirp):
    ris = RisArray((3, 4), 1, 1.25e-3)
    t1, t2 = Target((4, 2)), Target((3.5, 1.0), 0.3 - 0.2j)
    both = synthesize_ris_echo(Scene((2, 2), ris, (t1, t2)), _unit_program(1), small_chirp).samples
    a = synthesize_ris_echo(Scene((2, 2), ris, (t1,)), _unit_program(1), small_chirp).samples
    b = synthesize_ris_echo(Scene((2, 2), ris, (t2,)), _unit_program(1), small_chirp).samples
    np.testing.assert_allclose(both, a + b, rtol=0, atol=1e-12)


def test_sixteen_elements_match_naive_sum(far_scene):
    chirp = ChirpParams(num_samples=16)
    k = wavenumber_grid(chirp)
    y = synthesize_ris_echo(far_scene, _unit_program(16), chirp).samples
    ref = _naive_ris_echo((2, 2), far_scene.ris, [((4, 2), 1.0)], np.ones((1, 16, 16)), k)
    np.testing.assert_allclose(y, ref, rtol=0, atol=1e-10)


def test_programmed_echo_matches_naive_sum(far_scene):
    chirp = ChirpParams(num_samples=8)
    k = wavenumber_grid(chirp)
    traj = virtual_arc(far_scene.radar, far_scene.ris, math.radians(20), 5)
    prog = far_field_program(far_scene.ris, steering_from_trajectory(far_scene.radar, far_scene.ris, traj), HAMMING)
    scene = far_scene.with_targets([Target((4, 2), 0.5 + 0.5j), Target((3.6, 2.4), -1.0)])
    y = synthesize_ris_echo(scene, prog, chirp).samples
    ref = _naive_ris_echo((2, 2), scene.ris, [((4, 2), 0.5 + 0.5j), ((3.6, 2.4), -1.0)], prog.weights(k), k)
    np.testing.assert_allclose(y, ref, rtol=0, atol=1e-10)


@pytest.mark.parametrize("alpha", [2.0, -0.5 + 1.5j, 1j])
def test_linear_in_reflectivity(far_scene, small_chirp, alpha):
    traj = virtual_arc(far_scene.radar, far_scene.ris, math.radians(20), 4)
    prog = near_field_program(far_scene.ris, far_scene.radar, traj)
    scaled = far_scene.with_targets([Target((4, 2), alpha)])
    a = synthesize_ris_echo(far_scene, prog, small_chirp).samples
    b = synthesize_ris_echo(scaled, prog, small_chirp).samples
    np.testing.assert_allclose(b, alpha * a, rtol=1e-14, atol=1e-13)


def test_size_mismatch_rejected(far_scene, small_chirp):
    with pytest.raises(ForwardError):
        synthesize_ris_echo(far_scene, _unit_program(8), small_chirp)


def test_planar_matches_dirichlet_factorisation(far_scene):
    chirp = ChirpParams(num_samples=32)
    k = wavenumber_grid(chirp)
    phi = np.linspace(-0.4, 0.4, 101)
    prog = far_field_program(far_scene.ris, phi)
    y = synthesize_ris_echo(far_scene, prog, chirp, PropagationMode.PLANAR).samples
    x0 = element_positions(far_scene.ris)[0]
    r0v = x0 - np.array([2.0, 2.0])
    s0v = np.array([4.0, 2.0]) - x0
    r0, s0, p = np.linalg.norm(r0v), np.linalg.norm(s0v), 2.0
    delta = phi + r0v[0] / r0 - s0v[0] / s0
    model = np.exp(-1j * k * (r0 + s0 + p))[:, None] * dirichlet_profile(k[:, None], 16, 1.25e-3, delta[None, :])
    assert np.max(np.abs(y - model)) <= 1e-9 * np.max(np.abs(model))


def _quadratic_phase(k, ris, radar, target):
    """Second-order term dropped by the planar expansion about element 0."""
    span = ris.span
    x0 = element_positions(ris)[0]
    u = np.asarray(ris.direction)
    total = 0.0
    for a in (np.asarray(radar, float), np.asarray(target, float)):
        v = a - x0
        R = np.linalg.norm(v)
        total += span**2 * (1 - (v @ u / R) ** 2) / (2 * R)
    return k * total


def test_planar_error_follows_quadratic_term(far_scene):
    k = 2 * math.pi * 130e9 / 3e8
    ris = far_scene.ris
    for target in [(4.0, 2.0), (5.0, 0.0), (13.0, -16.0)]:
        err = k * np.max(np.abs(ris_paths((2, 2), ris, [target]) - ris_paths((2, 2), ris, [target], PropagationMode.PLANAR)))
        bound = _quadratic_phase(k, ris, (2, 2), target)
        assert err == pytest.approx(bound, rel=0.05)
    assert err < 0.2


def test_planar_error_grows_toward_array(far_scene):
    k = 2 * math.pi * 130e9 / 3e8
    ris = far_scene.ris
    errs = []
    for scale in (1.0, 0.5, 0.2):
        target = np.array([3.0, 4.0]) + scale * np.array([1.0, -2.0])
        d = ris_paths((2, 2), ris, [target]) - ris_paths((2, 2), ris, [target], PropagationMode.PLANAR)
        errs.append(k * np.max(np.abs(d)))
    assert errs[0] < errs[1] < errs[2]


def test_sar_single_position_round_trip(small_chirp):
    y = synthesize_sar_echo([Target((4, 2))], small_chirp, [(1.0, 6.0)]).samples[:, 0]
    k = wavenumber_grid(small_chirp)
    R = math.hypot(3, 4)
    np.testing.assert_allclose(y, np.exp(-1j * k * 2 * R), atol=1e-12)


def test_sar_equidistant_columns_identical(small_chirp):
    ang = np.linspace(0, 1, 7)
    pos = np.column_stack([4 + 2 * np.cos(ang), 2 + 2 * np.sin(ang)])
    y = synthesize_sar_echo([Target((4, 2))], small_chirp, pos).samples
    # one ulp of radius times k*2R ~ 1e4 rad
    assert np.max(np.abs(y - y[:, :1])) < 1e-10


def test_sar_matches_direct_formula():
    chirp = ChirpParams(num_samples=12)
    ris = RisArray((3, 4), 16, 1.25e-3)
    traj = virtual_arc((2, 2), ris, math.radians(20), 20)
    y = synthesize_sar_echo([Target((4, 2))], chirp, traj.positions).samples
    for i in range(12):
        ki = 2 * math.pi * (120e9 + 10e9 * i / 11) / 3e8
        for m, (qx, qy) in enumerate(traj.positions):
            ref = cmath.exp(-1j * ki * 2 * math.hypot(qx - 4, qy - 2))
            assert abs(y[i, m] - ref) < 1e-11


def test_sar_requires_positions(small_chirp):
    with pytest.raises(ForwardError):
        synthesize_sar_echo([Target((4, 2))], small_chirp, np.zeros((0, 2)))


def test_direct_path_adds_leakage(far_scene, small_chirp):
    prog = _unit_program(16)
    base = synthesize_ris_echo(far_scene, prog, small_chirp).samples
    leaky = synthesize_ris_echo(far_scene, prog, small_chirp, direct_path=True).samples
    k = wavenumber_grid(small_chirp)
    np.testing.assert_allclose(leaky - base, np.exp(-1j * k * 4.0)[:, None], atol=1e-12)


def test_spreading_scales_by_inverse_ranges():
    ris = RisArray((3, 4), 1, 1.25e-3)
    scene = Scene((2, 2), ris, (Target((4, 2)),))
    chirp = ChirpParams(num_samples=4)
    a = synthesize_ris_echo(scene, _unit_program(1), chirp).samples
    b = synthesize_ris_echo(scene, _unit_program(1), chirp, spreading=True).samples
    np.testing.assert_allclose(b, a / 5.0, atol=1e-14)
