"""End-to-end runs: synthesize, add noise, form the image, measure it."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import metrics
from .forward import PropagationMode, synthesize_ris_echo, synthesize_sar_echo
from .imaging import (
    ImageGrid,
    backproject,
    backproject_points,
    backproject_sar,
    backproject_sar_points,
    backproject_subregions,
    subregion_centers,
    subregion_points,
)
from .ris_control import (
    RisProgram,
    WindowKind,
    far_field_program,
    near_field_program,
    steering_from_trajectory,
    virtual_arc,
)
from .scenario import Scenario
from .signal import DataCube, add_awgn, wavenumber_grid


@dataclass
class RunResult:
    scenario: Scenario
    cube: DataCube
    image: ImageGrid
    cut: metrics.AzimuthCut
    report: dict
    program: RisProgram | None
    evaluate: Callable[[np.ndarray], np.ndarray]  # complex image value at arbitrary points


def _program(s: Scenario, trajectory) -> RisProgram:
    scene = s.scene
    k_c = 2.0 * math.pi * s.chirp.carrier / scene.speed_of_light if s.constant_phase else None
    if s.mode == "far":
        steering = steering_from_trajectory(scene.radar, scene.ris, trajectory)
        return far_field_program(scene.ris, steering, s.window, trajectory, k_c)
    # a Gaussian is applied per subregion in the matched filter, not on the RIS
    window = None if s.window.kind is WindowKind.GAUSSIAN else s.window
    return near_field_program(scene.ris, scene.radar, trajectory, window, k_c)


def simulate(s: Scenario):
    """Return ``(cube, program, trajectory)``; ``program`` is None for the SAR baseline."""
    scene = s.scene
    trajectory = virtual_arc(
        scene.radar, scene.ris, math.radians(s.trajectory.span_deg), s.trajectory.num_positions, s.aim_point()
    )
    if s.mode == "sar":
        cube = synthesize_sar_echo(list(scene.targets), s.chirp, trajectory.positions, scene.speed_of_light)
        program = None
    else:
        program = _program(s, trajectory)
        cube = synthesize_ris_echo(
            scene,
            program,
            s.chirp,
            PropagationMode(s.synthesis),
            direct_path=s.direct_path,
            spreading=s.spreading,
        )
    return add_awgn(cube, s.snr_db, s.seed), program, trajectory


def form_image(s: Scenario, cube: DataCube, program: RisProgram | None, trajectory):
    """Return ``(image, evaluate)`` where ``evaluate`` maps points to complex values."""
    scene = s.scene
    if s.mode == "sar":
        c = scene.speed_of_light

        def evaluate(pts):
            return backproject_sar_points(cube, trajectory.positions, pts, c)

        return backproject_sar(cube, trajectory.positions, s.grid, c), evaluate
    mode = PropagationMode(s.filter)
    if s.mode == "near" and s.window.kind is WindowKind.GAUSSIAN:
        plan = subregion_centers(s.grid, *s.subregions)
        scale = s.window.sigma_scale

        def evaluate(pts):
            return subregion_points(cube, scene, program, plan, pts, mode, scale)

        return backproject_subregions(cube, scene, program, plan, mode, scale), evaluate

    def evaluate(pts):
        return backproject_points(cube, scene, program, pts, mode)

    return backproject(cube, scene, program, s.grid, mode), evaluate


def azimuth_cut(s: Scenario, image: ImageGrid, evaluate, trajectory) -> metrics.AzimuthCut:
    """Profile through the image peak along the configured cut.

    ``isorange`` follows the curve of constant two-way path through the peak,
    so the profile carries only cross-range structure: foci at the radar and
    the RIS centre for RIS data, both at the aperture centre for SAR data.
    """
    if s.cut.kind in ("x", "y"):
        return metrics.grid_cut(image, s.cut.kind)
    peak = metrics.peak_location(image)
    if s.mode == "sar":
        centre = trajectory.positions.mean(axis=0)
        a, b = centre, centre
    else:
        a, b = np.asarray(s.scene.radar), np.asarray(s.scene.ris.center)
    pts, arc = metrics.isorange_contour(a, b, peak, s.cut.half_length, s.cut.samples)
    return metrics.AzimuthCut(arc, np.abs(evaluate(pts)))


def _safe(fn, *args):
    try:
        return float(fn(*args))
    except metrics.MetricError:
        return None


def theory(s: Scenario, trajectory) -> dict:
    scene = s.scene
    lam = scene.speed_of_light / s.chirp.carrier
    target = np.asarray(scene.targets[0].position)
    ris_range = float(np.linalg.norm(target - np.asarray(scene.ris.center)))
    half_arc = 0.5 * trajectory.arc_length()
    return {
        "wavelength_m": lam,
        "ris_to_target_m": ris_range,
        "rar_resolution_m": metrics.rar_resolution(ris_range, lam, scene.ris.aperture),
        "sar_resolution_m": metrics.sar_resolution(lam, half_arc) if half_arc > 0 else None,
        "half_arc_length_m": half_arc,
        "fraunhofer_distance_m": metrics.ris_fraunhofer(scene.ris, lam),
    }


def measure(s: Scenario, image: ImageGrid, cut: metrics.AzimuthCut) -> dict:
    peak = metrics.peak_location(image)
    target = s.scene.targets[0].position
    offset = [(peak.x - target.x) / s.grid.dx, (peak.y - target.y) / s.grid.dy]
    return {
        "peak": [peak.x, peak.y],
        "peak_offset_px": offset,
        "peak_error_m": math.hypot(peak.x - target.x, peak.y - target.y),
        "cut": s.cut.kind,
        "mainlobe_width_m": _safe(metrics.mainlobe_width, cut),
        "mainlobe_width_6db_m": _safe(metrics.mainlobe_width, cut, -6.0),
        "pslr_db": _safe(metrics.pslr, cut),
        "x_cut_width_m": _safe(metrics.mainlobe_width, metrics.grid_cut(image, "x")),
        "y_cut_width_m": _safe(metrics.mainlobe_width, metrics.grid_cut(image, "y")),
    }


def run(s: Scenario) -> RunResult:
    cube, program, trajectory = simulate(s)
    image, evaluate = form_image(s, cube, program, trajectory)
    cut = azimuth_cut(s, image, evaluate, trajectory)
    report = {
        "scenario": s.name,
        "mode": s.mode,
        "window": s.window.kind.value,
        "seed": s.seed,
        "snr_db": "none" if s.snr_db is None else s.snr_db,
        "theory": theory(s, trajectory),
        "measured": measure(s, image, cut),
    }
    return RunResult(s, cube, image, cut, report, program, evaluate)


def wavenumbers(s: Scenario) -> np.ndarray:
    return wavenumber_grid(s.chirp, s.scene.speed_of_light)
