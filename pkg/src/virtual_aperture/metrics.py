"""Resolution formulas and point-spread-function measurements."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RisArray, Vec2
from .imaging import ImageGrid


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class AzimuthCut:
    coordinates: np.ndarray
    magnitudes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.coordinates, dtype=float)
        m = np.asarray(self.magnitudes, dtype=float)
        if x.shape != m.shape or x.ndim != 1 or len(x) < 3:
            raise MetricError("a cut needs at least three (coordinate, magnitude) pairs")
        if np.any(np.diff(x) <= 0):
            raise MetricError("cut coordinates must be strictly increasing")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise MetricError("cut magnitudes must be finite and non-negative")
        object.__setattr__(self, "coordinates", x)
        object.__setattr__(self, "magnitudes", m)


def rar_resolution(R: float, wavelength: float, D: float) -> float:
    """Real-aperture cross-range cell R*lambda/D."""
    return R * wavelength / D


def sar_resolution(wavelength: float, L: float) -> float:
    """Synthetic-aperture cross-range cell lambda/(2L)."""
    return wavelength / (2.0 * L)


def fraunhofer_distance(D: float, wavelength: float) -> float:
    return 2.0 * D * D / wavelength


def ris_fraunhofer(ris: RisArray, wavelength: float) -> float:
    # aperture measured between the outer element centres
    return fraunhofer_distance(ris.span, wavelength)


def _crossing(x0, x1, m0, m1, level):
    return x0 + (x1 - x0) * (m0 - level) / (m0 - m1)


def _peak_index(cut: AzimuthCut) -> int:
    m = cut.magnitudes
    i = int(np.argmax(m))
    if i == 0 or i == len(m) - 1:
        raise MetricError("cut peak sits at an endpoint")
    return i


def mainlobe_width(cut: AzimuthCut, level_db: float = -3.0) -> float:
    """Width of the contiguous region around the peak above ``level_db``."""
    m = cut.magnitudes
    x = cut.coordinates
    i = _peak_index(cut)
    level = m[i] * 10.0 ** (level_db / 20.0)
    j = i
    while j < len(m) - 1 and m[j + 1] >= level:
        j += 1
    if j == len(m) - 1:
        raise MetricError("main lobe exceeds cut extent")
    right = _crossing(x[j], x[j + 1], m[j], m[j + 1], level)
    j = i
    while j > 0 and m[j - 1] >= level:
        j -= 1
    if j == 0:
        raise MetricError("main lobe exceeds cut extent")
    left = _crossing(x[j], x[j - 1], m[j], m[j - 1], level)
    return right - left


def mainlobe_bounds(cut: AzimuthCut) -> tuple[int, int]:
    """Indices of the first minima either side of the peak."""
    m = cut.magnitudes
    i = _peak_index(cut)
    lo = i
    while lo > 0 and m[lo - 1] < m[lo]:
        lo -= 1
    hi = i
    while hi < len(m) - 1 and m[hi + 1] < m[hi]:
        hi += 1
    return lo, hi


def pslr(cut: AzimuthCut) -> float:
    """Peak sidelobe ratio in dB (negative); sidelobes are local maxima outside the main lobe."""
    m = cut.magnitudes
    lo, hi = mainlobe_bounds(cut)
    peak = m[_peak_index(cut)]
    padded = np.concatenate([[-np.inf], m, [-np.inf]])
    is_max = (padded[1:-1] >= padded[:-2]) & (padded[1:-1] >= padded[2:])
    outside = np.ones(len(m), dtype=bool)
    outside[lo : hi + 1] = False
    candidates = m[is_max & outside]
    if len(candidates) == 0:
        raise MetricError("no sidelobe found in cut")
    side = candidates.max()
    if side == 0:
        return -math.inf
    return 20.0 * math.log10(side / peak)


def peak_location(image: ImageGrid) -> Vec2:
    """Centre of the brightest pixel; ties resolve to the smallest (ix, iy)."""
    mag = image.magnitude
    if not np.any(mag):
        raise MetricError("image is identically zero")
    ix, iy = np.unravel_index(int(np.argmax(mag)), mag.shape)
    return image.grid.pixel_center(int(ix), int(iy))


def peak_index(image: ImageGrid) -> tuple[int, int]:
    ix, iy = np.unravel_index(int(np.argmax(image.magnitude)), image.grid.shape)
    return int(ix), int(iy)


def grid_cut(image: ImageGrid, axis: str = "x", through: tuple[int, int] | None = None) -> AzimuthCut:
    """Row (``axis="x"``) or column (``axis="y"``) of the image through the peak pixel."""
    ix, iy = through if through is not None else peak_index(image)
    if axis == "x":
        return AzimuthCut(image.grid.x_axis() - image.grid.x_axis()[ix], image.magnitude[:, iy])
    if axis == "y":
        return AzimuthCut(image.grid.y_axis() - image.grid.y_axis()[iy], image.magnitude[ix, :])
    raise MetricError(f"unknown cut axis {axis!r}")


def isorange_contour(focus_a, focus_b, through, half_length: float, num: int = 801):
    """Points on the curve |q-a| + |q-b| = const passing through ``through``.

    The curve is swept by angle about ``focus_b`` over roughly +-half_length of
    arc. Returns ``(points, arc)`` where ``arc`` is the signed arc length from
    ``through``. With ``a == b`` the curve is a circle.
    """
    if num < 3 or num % 2 == 0:
        raise MetricError("contour sample count must be odd and >= 3")
    a = np.asarray(focus_a, dtype=float)
    b = np.asarray(focus_b, dtype=float)
    q0 = np.asarray(through, dtype=float)
    rho = np.linalg.norm(q0 - a) + np.linalg.norm(q0 - b)
    w = b - a
    radius = np.linalg.norm(q0 - b)
    if radius == 0:
        raise MetricError("contour anchor coincides with a focus")
    theta0 = math.atan2(q0[1] - b[1], q0[0] - b[0])
    theta = theta0 + np.linspace(-1.0, 1.0, num) * half_length / radius
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    t = (rho**2 - w @ w) / (2.0 * (rho + u @ w))
    pts = b[None, :] + t[:, None] * u
    pts[num // 2] = q0
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(steps)])
    return pts, arc - arc[num // 2]
