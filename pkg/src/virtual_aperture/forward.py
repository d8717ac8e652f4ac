"""Echo synthesis for RIS-aided scenes and for a moving-radar SAR baseline."""

from __future__ import annotations

import enum

import numpy as np

from .core import RisArray, Scene, Target, element_positions
from .ris_control import RisProgram
from .signal import ChirpParams, DataCube, wavenumber_grid


class ForwardError(ValueError):
    pass


class PropagationMode(enum.Enum):
    EXACT = "exact"  # spherical wavefronts, exact element-wise path lengths
    PLANAR = "planar"  # far-field expansion about element 0


def ris_paths(radar, ris: RisArray, points, mode: PropagationMode = PropagationMode.EXACT) -> np.ndarray:
    """One-bounce path lengths radar -> element n -> point -> radar, shape (P, N)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    radar = np.asarray(radar, dtype=float)
    x = element_positions(ris)
    back = np.linalg.norm(pts - radar[None, :], axis=1)
    if mode is PropagationMode.EXACT:
        out_leg = np.linalg.norm(x - radar[None, :], axis=1)
        bounce = np.linalg.norm(pts[:, None, :] - x[None, :, :], axis=2)
        return out_leg[None, :] + bounce + back[:, None]
    u = np.asarray(ris.direction)
    r0_vec = x[0] - radar
    r0 = np.linalg.norm(r0_vec)
    s0_vec = pts - x[0][None, :]
    s0 = np.linalg.norm(s0_vec, axis=1)
    cos_diff = (r0_vec @ u) / r0 - (s0_vec @ u) / s0
    n = np.arange(ris.num_elements)
    return (r0 + s0 + back)[:, None] + n[None, :] * ris.spacing * cos_diff[:, None]


def _spreading(radar, ris: RisArray, point) -> np.ndarray:
    x = element_positions(ris)
    return 1.0 / (
        np.linalg.norm(x - np.asarray(radar, dtype=float), axis=1)
        * np.linalg.norm(x - np.asarray(point, dtype=float), axis=1)
    )


def synthesize_ris_echo(
    scene: Scene,
    program: RisProgram,
    chirp: ChirpParams,
    mode: PropagationMode = PropagationMode.EXACT,
    *,
    direct_path: bool = False,
    spreading: bool = False,
) -> DataCube:
    """Dechirped echo y(i, m) of every target seen through the programmed RIS.

    ``direct_path`` adds the radar -> target -> radar leakage term and
    ``spreading`` weights each element path by 1/(r_n s_n); both are off by
    default, matching the constant-amplitude model.
    """
    if program.num_elements != scene.ris.num_elements:
        raise ForwardError(
            f"program drives {program.num_elements} elements, RIS has {scene.ris.num_elements}"
        )
    k = wavenumber_grid(chirp, scene.speed_of_light)
    weights = program.weights(k)  # (M, N, I)
    y = np.zeros((chirp.num_samples, program.num_steps), dtype=complex)
    for target in scene.targets:
        paths = ris_paths(scene.radar, scene.ris, [target.position], mode)[0]
        gain = _spreading(scene.radar, scene.ris, target.position) if spreading else 1.0
        propagation = gain * np.exp(-1j * k[:, None] * paths[None, :])  # (I, N)
        y += target.reflectivity * chirp.amplitude * np.einsum("mni,in->im", weights, propagation)
        if direct_path:
            rt = 2.0 * np.linalg.norm(np.asarray(target.position) - np.asarray(scene.radar))
            y += (target.reflectivity * chirp.amplitude * np.exp(-1j * k * rt))[:, None]
    return DataCube(y, chirp)


def synthesize_sar_echo(
    targets: list[Target],
    chirp: ChirpParams,
    radar_positions,
    c: float = 3.0e8,
) -> DataCube:
    """Monostatic moving-radar baseline: y(i, m) = sum sigma A exp(-j k_i 2|q_m - t|)."""
    q = np.atleast_2d(np.asarray(radar_positions, dtype=float))
    if len(q) == 0:
        raise ForwardError("no radar positions")
    k = wavenumber_grid(chirp, c)
    y = np.zeros((chirp.num_samples, len(q)), dtype=complex)
    for target in targets:
        rng = 2.0 * np.linalg.norm(q - np.asarray(target.position)[None, :], axis=1)
        y += target.reflectivity * chirp.amplitude * np.exp(-1j * k[:, None] * rng[None, :])
    return DataCube(y, chirp)
