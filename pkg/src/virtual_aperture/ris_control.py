"""RIS phase programs that emulate a moving virtual source.

A program is stored as two ``(M, N)`` arrays, an amplitude window and a path
delay in metres, so that

    weight(m, n, i) = amplitude[m, n] * exp(-1j * k_i * delay[m, n])

Far-field programs use ``delay = n * d * phi_m`` (linear steering); near-field
programs use the extra path that makes the radar appear to sit at ``v_m``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import RisArray, Vec2, as_vec2, element_positions, mirror_point


class ProgramError(ValueError):
    pass


class WindowKind(enum.Enum):
    RECTANGULAR = "rect"
    HAMMING = "hamming"
    GAUSSIAN = "gaussian"


class ProgramMode(enum.Enum):
    FAR_FIELD_LINEAR = "far"
    NEAR_FIELD_MIRROR = "near"


@dataclass(frozen=True)
class WindowSpec:
    """Amplitude taper across the RIS.

    For ``GAUSSIAN`` either ``reference`` fixes the image point used to build
    the sampling points, or it is ``None`` and each virtual position gets its
    own window built for the point symmetric to it (``symmetry`` selects the
    reflection across the RIS line, ``"line"``, or through the RIS centre,
    ``"center"``). ``sigma_scale`` widens the Gaussian; ``inf`` makes it flat.
    """

    kind: WindowKind = WindowKind.RECTANGULAR
    reference: Vec2 | None = None
    symmetry: str = "line"
    sigma_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", WindowKind(self.kind))
        if self.reference is not None:
            object.__setattr__(self, "reference", as_vec2(self.reference))
        if self.symmetry not in ("line", "center"):
            raise ProgramError(f"unknown symmetry {self.symmetry!r}")
        if not self.sigma_scale > 0:
            raise ProgramError("sigma_scale must be positive")


RECTANGULAR = WindowSpec(WindowKind.RECTANGULAR)
HAMMING = WindowSpec(WindowKind.HAMMING)


@dataclass(frozen=True)
class VirtualTrajectory:
    positions: np.ndarray
    arc_center: Vec2
    radius: float
    span: float
    angles: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.positions)

    def arc_length(self) -> float:
        return self.radius * self.span


@dataclass(frozen=True)
class RisProgram:
    amplitude: np.ndarray
    delay: np.ndarray
    trajectory: VirtualTrajectory | None
    window: WindowSpec
    mode: ProgramMode
    # None: phases follow each fast-time wavenumber (true time delay). A float
    # pins every phase to that single wavenumber, as fixed-phase hardware does.
    phase_wavenumber: float | None = None

    def __post_init__(self):
        amp = np.asarray(self.amplitude, dtype=float)
        delay = np.asarray(self.delay, dtype=float)
        if amp.shape != delay.shape or amp.ndim != 2:
            raise ProgramError("amplitude and delay must share an (M, N) shape")
        if np.any(amp < 0) or np.any(amp > 1.0 + 1e-12):
            raise ProgramError("passive RIS weights must satisfy |w| <= 1")
        amp.flags.writeable = False
        delay.flags.writeable = False
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "delay", delay)

    @property
    def num_steps(self) -> int:
        return self.amplitude.shape[0]

    @property
    def num_elements(self) -> int:
        return self.amplitude.shape[1]

    def phase_k(self, k: np.ndarray) -> np.ndarray:
        k = np.asarray(k, dtype=float)
        if self.phase_wavenumber is None:
            return k
        return np.full_like(k, self.phase_wavenumber)

    def weights(self, k) -> np.ndarray:
        """Materialise the full ``(M, N, I)`` complex weight tensor."""
        kp = self.phase_k(k)
        return self.amplitude[:, :, None] * np.exp(-1j * kp[None, None, :] * self.delay[:, :, None])

    def with_amplitude(self, amplitude, window: WindowSpec) -> "RisProgram":
        amp = np.broadcast_to(np.asarray(amplitude, dtype=float), self.delay.shape)
        return RisProgram(amp, self.delay, self.trajectory, window, self.mode, self.phase_wavenumber)


def virtual_arc(radar, ris: RisArray, span: float, num_positions: int, aim=None) -> VirtualTrajectory:
    """Virtual-source positions on a circle about the RIS centre.

    The circle radius is the radar-RIS distance. By default the arc is centred
    on the radar's image across the RIS line; with ``aim`` it is centred on the
    direction opposite ``aim``, so the synthesized beam sweeps across ``aim``.
    """
    if num_positions < 1:
        raise ProgramError("need at least one virtual position")
    if span < 0:
        raise ProgramError("span must be non-negative")
    c = np.asarray(ris.center)
    radius = float(np.linalg.norm(np.asarray(radar, dtype=float) - c))
    if radius == 0.0:
        raise ProgramError("degenerate radius: radar sits at the RIS centre")
    if aim is None:
        m = np.asarray(mirror_point(radar, ris)) - c
    else:
        m = c - np.asarray(aim, dtype=float)
        if not np.any(m):
            raise ProgramError("aim point coincides with the RIS centre")
    theta0 = math.atan2(m[1], m[0])
    if num_positions == 1:
        angles = np.array([theta0])
    else:
        angles = theta0 + np.linspace(-span / 2.0, span / 2.0, num_positions)
    positions = c[None, :] + radius * np.column_stack([np.cos(angles), np.sin(angles)])
    return VirtualTrajectory(positions, ris.center, radius, float(span), angles)


def steering_from_trajectory(radar, ris: RisArray, trajectory: VirtualTrajectory) -> np.ndarray:
    """Cosine-difference steering parameters for a linear (far-field) program.

    Step ``m`` points the beam at the point symmetric to ``v_m`` through the RIS
    centre: phi_m = u.mirror_dir - u.v_m_dir with ``u`` the RIS axis.
    """
    u = np.asarray(ris.direction)
    c = np.asarray(ris.center)
    mirror_dir = np.asarray(mirror_point(radar, ris)) - c
    mirror_cos = mirror_dir @ u / np.linalg.norm(mirror_dir)
    v = trajectory.positions - c[None, :]
    return mirror_cos - (v @ u) / np.linalg.norm(v, axis=1)


def hamming_weights(num_elements: int) -> np.ndarray:
    if num_elements == 1:
        return np.ones(1)
    n = np.arange(num_elements)
    return 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (num_elements - 1))


def gaussian_weights(samples, sigma_scale: float = 1.0) -> np.ndarray:
    """Max-normalised Gaussian over non-uniform sampling points.

    Uses the population mean and standard deviation of ``samples``. A zero
    spread (or ``sigma_scale=inf``) yields a flat window.
    """
    l = np.asarray(samples, dtype=float)
    sigma = float(np.std(l)) * sigma_scale
    if sigma == 0.0 or not math.isfinite(sigma):
        return np.ones_like(l)
    w = np.exp(-((l - l.mean()) ** 2) / (2.0 * sigma**2))
    return w / w.max()


def nuft_samples(ris: RisArray, radar, reference) -> np.ndarray:
    """Round-trip path lengths radar -> element -> reference -> radar."""
    x = element_positions(ris)
    radar = np.asarray(radar, dtype=float)
    p = np.asarray(reference, dtype=float)
    return (
        np.linalg.norm(x - radar, axis=1)
        + np.linalg.norm(x - p, axis=1)
        + np.linalg.norm(p - radar)
    )


def gaussian_window(ris: RisArray, radar, reference_point, sigma_scale: float = 1.0) -> np.ndarray:
    x = element_positions(ris)
    if np.any(np.linalg.norm(x - np.asarray(reference_point, dtype=float), axis=1) == 0.0):
        raise ProgramError("window reference point coincides with a RIS element")
    return gaussian_weights(nuft_samples(ris, radar, reference_point), sigma_scale)


def symmetric_point(v, ris: RisArray, symmetry: str) -> Vec2:
    if symmetry == "line":
        return mirror_point(v, ris)
    c = np.asarray(ris.center)
    return Vec2(*(2.0 * c - np.asarray(v, dtype=float)))


def window_amplitudes(window: WindowSpec, ris: RisArray, radar=None, trajectory=None, steps: int = 1) -> np.ndarray:
    """``(M, N)`` amplitude taper for ``window``."""
    n = ris.num_elements
    if window.kind is WindowKind.RECTANGULAR:
        return np.ones((steps, n))
    if window.kind is WindowKind.HAMMING:
        return np.tile(hamming_weights(n), (steps, 1))
    if radar is None:
        raise ProgramError("a Gaussian window needs the radar position")
    if window.reference is not None:
        return np.tile(gaussian_window(ris, radar, window.reference, window.sigma_scale), (steps, 1))
    if trajectory is None:
        raise ProgramError("a per-position Gaussian window needs a trajectory")
    return np.array(
        [
            gaussian_window(ris, radar, symmetric_point(v, ris, window.symmetry), window.sigma_scale)
            for v in trajectory.positions
        ]
    )


def far_field_program(
    ris: RisArray,
    steering,
    window: WindowSpec = RECTANGULAR,
    trajectory: VirtualTrajectory | None = None,
    phase_wavenumber: float | None = None,
) -> RisProgram:
    """Linear progressive phases: weight(m, n, i) = w(n) exp(-j k_i n d phi_m)."""
    if window.kind is WindowKind.GAUSSIAN:
        raise ProgramError("far-field programs take rectangular or Hamming windows")
    phi = np.atleast_1d(np.asarray(steering, dtype=float))
    n = np.arange(ris.num_elements)
    delay = phi[:, None] * n[None, :] * ris.spacing
    amp = window_amplitudes(window, ris, steps=len(phi))
    return RisProgram(amp, delay, trajectory, window, ProgramMode.FAR_FIELD_LINEAR, phase_wavenumber)


def near_field_program(
    ris: RisArray,
    radar,
    trajectory: VirtualTrajectory,
    window: WindowSpec | None = None,
    phase_wavenumber: float | None = None,
) -> RisProgram:
    """Per-element extra path |v_m - x_n| - |radar - x_n| for every virtual position."""
    if len(trajectory) == 0:
        raise ProgramError("trajectory is empty")
    window = window or RECTANGULAR
    x = element_positions(ris)
    radar_arr = np.asarray(radar, dtype=float)
    to_radar = np.linalg.norm(x - radar_arr, axis=1)
    to_virtual = np.linalg.norm(trajectory.positions[:, None, :] - x[None, :, :], axis=2)
    delay = to_virtual - to_radar[None, :]
    amp = window_amplitudes(window, ris, radar_arr, trajectory, steps=len(trajectory))
    return RisProgram(amp, delay, trajectory, window, ProgramMode.NEAR_FIELD_MIRROR, phase_wavenumber)
