"""Matched-filter backprojection for RIS virtual-source and SAR data.

For a RIS program with weights W(m, n, i) the model echo of a unit target at q
is sum_n W(m, n, i) exp(-j k_i L_n(q)). Correlating the cube against it,

    I(q) = sum_i sum_m y(i, m) conj(yhat_q(i, m))
         = sum_n sum_i Z(n, i) exp(+j k_i L_n(q)),   Z(n, i) = sum_m y(i, m) conj(W(m, n, i))

so the slow-time sum is done once per image and only the (n, i) double sum
runs per pixel. That inner sum is ``kernels.correlate``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import Scene, Vec2, as_vec2, element_positions
from .forward import PropagationMode, ris_paths
from .ris_control import ProgramMode, RisProgram, WindowKind, WindowSpec, gaussian_window
from .signal import DataCube, wavenumber_grid

POINT_CHUNK = 4096


class ImagingError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Pixel lattice; ``origin`` is the centre of pixel (0, 0)."""

    origin: Vec2
    dx: float
    dy: float
    nx: int
    ny: int

    def __post_init__(self):
        object.__setattr__(self, "origin", as_vec2(self.origin))
        if not (self.dx > 0 and self.dy > 0):
            raise ImagingError("pixel spacing must be positive")
        if self.nx < 1 or self.ny < 1:
            raise ImagingError("empty grid")

    @classmethod
    def centered(cls, center, half_width: float, spacing: float) -> "GridSpec":
        n = int(round(half_width / spacing))
        c = as_vec2(center)
        return cls(Vec2(c.x - n * spacing, c.y - n * spacing), spacing, spacing, 2 * n + 1, 2 * n + 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def x_axis(self) -> np.ndarray:
        return self.origin.x + self.dx * np.arange(self.nx)

    def y_axis(self) -> np.ndarray:
        return self.origin.y + self.dy * np.arange(self.ny)

    def pixel_center(self, ix: int, iy: int) -> Vec2:
        return Vec2(self.origin.x + ix * self.dx, self.origin.y + iy * self.dy)

    def points(self, ix=slice(None), iy=slice(None)) -> np.ndarray:
        gx, gy = np.meshgrid(self.x_axis()[ix], self.y_axis()[iy], indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass(frozen=True)
class ImageGrid:
    grid: GridSpec
    values: np.ndarray  # complex, shape (nx, ny)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ImagingError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ImagingError("image contains non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def db(self, floor_db: float = -60.0) -> np.ndarray:
        mag = self.magnitude
        peak = mag.max()
        if peak == 0:
            return np.zeros_like(mag)
        with np.errstate(divide="ignore"):
            out = 20.0 * np.log10(mag / peak)
        return np.maximum(out, floor_db)


@dataclass(frozen=True)
class SubregionPlan:
    grid: GridSpec
    x_edges: tuple[int, ...]
    y_edges: tuple[int, ...]

    def __post_init__(self):
        for edges, n in ((self.x_edges, self.grid.nx), (self.y_edges, self.grid.ny)):
            if edges[0] != 0 or edges[-1] != n or any(b <= a for a, b in zip(edges, edges[1:])):
                raise ImagingError("subregion plan does not tile the grid")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.x_edges) - 1, len(self.y_edges) - 1)

    def blocks(self):
        """Yield ``(x_slice, y_slice, center)`` for every block, x-major."""
        for x0, x1 in zip(self.x_edges, self.x_edges[1:]):
            for y0, y1 in zip(self.y_edges, self.y_edges[1:]):
                center = Vec2(
                    self.grid.origin.x + 0.5 * (x0 + x1 - 1) * self.grid.dx,
                    self.grid.origin.y + 0.5 * (y0 + y1 - 1) * self.grid.dy,
                )
                yield slice(x0, x1), slice(y0, y1), center

    def centers(self) -> list[Vec2]:
        return [c for _, _, c in self.blocks()]


def subregion_centers(grid: GridSpec, gx: int, gy: int) -> SubregionPlan:
    """Split the grid into gx x gy blocks; the last block on each axis takes the remainder."""
    if gx < 1 or gy < 1 or gx > grid.nx or gy > grid.ny:
        raise ImagingError(f"cannot split a {grid.nx}x{grid.ny} grid into {gx}x{gy} blocks")

    def edges(n, g):
        w = n // g
        return tuple(i * w for i in range(g)) + (n,)

    return SubregionPlan(grid, edges(grid.nx, gx), edges(grid.ny, gy))


def focus(cube: DataCube, r0: float, wavenumbers) -> DataCube:
    """Remove a known common path ``r0``: y'(i, m) = y(i, m) exp(+j k_i r0)."""
    k = np.asarray(wavenumbers, dtype=float)
    return DataCube(cube.samples * np.exp(1j * k * r0)[:, None], cube.chirp)


def dirichlet_profile(k, num_elements: int, spacing: float, delta):
    """Closed form of sum_{n<N} exp(-j k n d delta).

    Evaluated as exp(-j (N-1) x/2) sin(N x/2) / sin(x/2) with x reduced to
    (-pi, pi]; returns N exactly where x is a multiple of 2 pi.
    """
    if num_elements < 1:
        raise ImagingError("need at least one element")
    x = np.asarray(k, dtype=float) * spacing * np.asarray(delta, dtype=float)
    xr = x - 2.0 * np.pi * np.round(x / (2.0 * np.pi))
    half = np.sin(xr / 2.0)
    zero = half == 0.0
    safe = np.where(zero, 1.0, half)
    n = num_elements
    val = np.exp(-0.5j * (n - 1) * xr) * np.sin(n * xr / 2.0) / safe
    val = np.where(zero, complex(n), val)
    return val[()] if np.ndim(val) == 0 else val


def _reduce_slow_time(cube: DataCube, program: RisProgram, k: np.ndarray) -> np.ndarray:
    weights = program.weights(k)  # (M, N, I)
    return np.einsum("im,mni->ni", cube.samples, np.conj(weights))


def _check(cube: DataCube, program: RisProgram, scene: Scene):
    if cube.slow_time_len != program.num_steps:
        raise ImagingError(
            f"cube has {cube.slow_time_len} slow-time columns, program has {program.num_steps} steps"
        )
    if program.num_elements != scene.ris.num_elements:
        raise ImagingError("program and RIS disagree on the element count")


def _correlate_points(zt, k, paths_fn, points, offset=0.0):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(pts), dtype=complex)
    for start in range(0, len(pts), POINT_CHUNK):
        paths = paths_fn(pts[start : start + POINT_CHUNK]) - offset
        out[start : start + POINT_CHUNK] = kernels.correlate(zt, k, paths)
    return out


def backproject_points(
    cube: DataCube,
    scene: Scene,
    program: RisProgram,
    points,
    mode: PropagationMode = PropagationMode.EXACT,
) -> np.ndarray:
    """Complex matched-filter output at arbitrary points, shape (P,)."""
    _check(cube, program, scene)
    k = wavenumber_grid(cube.chirp, scene.speed_of_light)
    zt = _reduce_slow_time(cube, program, k)
    offset = 0.0
    if mode is PropagationMode.PLANAR:
        # focusing: strip the known radar -> element-0 leg from data and model alike
        r0 = float(np.linalg.norm(element_positions(scene.ris)[0] - np.asarray(scene.radar)))
        zt = zt * np.exp(1j * k * r0)[None, :]
        offset = r0
    paths_fn = lambda pts: ris_paths(scene.radar, scene.ris, pts, mode)  # noqa: E731
    return cube.chirp.amplitude * _correlate_points(zt, k, paths_fn, points, offset)


def backproject(
    cube: DataCube,
    scene: Scene,
    program: RisProgram,
    grid: GridSpec,
    mode: PropagationMode = PropagationMode.EXACT,
) -> ImageGrid:
    values = backproject_points(cube, scene, program, grid.points(), mode)
    return ImageGrid(grid, values.reshape(grid.shape))


def _gaussian_block_program(scene: Scene, base: RisProgram, center, sigma_scale: float) -> RisProgram:
    w = gaussian_window(scene.ris, scene.radar, center, sigma_scale)
    spec = WindowSpec(WindowKind.GAUSSIAN, reference=center, sigma_scale=sigma_scale)
    return base.with_amplitude(w[None, :], spec)


def backproject_subregions(
    cube: DataCube,
    scene: Scene,
    base_program: RisProgram,
    plan: SubregionPlan,
    mode: PropagationMode = PropagationMode.EXACT,
    sigma_scale: float = 1.0,
) -> ImageGrid:
    """Backproject each block with a Gaussian filter window referenced at its centre."""
    if base_program.mode is not ProgramMode.NEAR_FIELD_MIRROR:
        raise ImagingError("subregion imaging needs a near-field program")
    if not np.all(base_program.amplitude == 1.0):
        raise ImagingError("base program must carry no amplitude window")
    values = np.empty(plan.grid.shape, dtype=complex)
    for xs, ys, center in plan.blocks():
        program = _gaussian_block_program(scene, base_program, center, sigma_scale)
        pts = plan.grid.points(xs, ys)
        block = backproject_points(cube, scene, program, pts, mode)
        values[xs, ys] = block.reshape(values[xs, ys].shape)
    return ImageGrid(plan.grid, values)


def subregion_points(
    cube: DataCube,
    scene: Scene,
    base_program: RisProgram,
    plan: SubregionPlan,
    points,
    mode: PropagationMode = PropagationMode.EXACT,
    sigma_scale: float = 1.0,
) -> np.ndarray:
    """Evaluate the subregion image off-grid: each point uses the window of its block."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    g = plan.grid
    ix = np.clip(np.rint((pts[:, 0] - g.origin.x) / g.dx).astype(int), 0, g.nx - 1)
    iy = np.clip(np.rint((pts[:, 1] - g.origin.y) / g.dy).astype(int), 0, g.ny - 1)
    bx = np.searchsorted(plan.x_edges, ix, side="right") - 1
    by = np.searchsorted(plan.y_edges, iy, side="right") - 1
    centers = plan.centers()
    gy = plan.shape[1]
    out = np.empty(len(pts), dtype=complex)
    for b in np.unique(bx * gy + by):
        sel = (bx * gy + by) == b
        program = _gaussian_block_program(scene, base_program, centers[b], sigma_scale)
        out[sel] = backproject_points(cube, scene, program, pts[sel], mode)
    return out


def backproject_sar_points(cube: DataCube, radar_positions, points, c: float = 3.0e8) -> np.ndarray:
    q = np.atleast_2d(np.asarray(radar_positions, dtype=float))
    if cube.slow_time_len != len(q):
        raise ImagingError("cube columns and radar positions disagree")
    k = wavenumber_grid(cube.chirp, c)
    zt = cube.samples.T
    paths_fn = lambda pts: 2.0 * np.linalg.norm(pts[:, None, :] - q[None, :, :], axis=2)  # noqa: E731
    return cube.chirp.amplitude * _correlate_points(zt, k, paths_fn, points)


def backproject_sar(cube: DataCube, radar_positions, grid: GridSpec, c: float = 3.0e8) -> ImageGrid:
    values = backproject_sar_points(cube, radar_positions, grid.points(), c)
    return ImageGrid(grid, values.reshape(grid.shape))
