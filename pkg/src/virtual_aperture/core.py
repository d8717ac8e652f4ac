"""Geometry primitives and the scene description shared by every module.

The world is a 2D plane. Positions are plain ``Vec2`` tuples so they convert
to numpy with ``np.asarray`` and stay hashable/immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

SPEED_OF_LIGHT = 3.0e8  # m/s; reproduces the published wavelength-derived figures exactly


class GeometryError(ValueError):
    """Raised when a geometric description violates its invariants."""


class Vec2(NamedTuple):
    x: float
    y: float

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y], dtype=dtype or float)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def as_vec2(value: Sequence[float]) -> Vec2:
    x, y = (float(v) for v in value)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GeometryError(f"non-finite coordinate {value!r}")
    return Vec2(x, y)


@dataclass(frozen=True)
class RisArray:
    """Uniform linear RIS centred on ``center``.

    Element ``n`` sits at ``center + (n - (N-1)/2) * spacing * direction``.
    """

    center: Vec2
    num_elements: int
    spacing: float
    direction: Vec2 = Vec2(1.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec2(self.center))
        object.__setattr__(self, "direction", as_vec2(self.direction))
        if abs(self.direction.norm() - 1.0) > 1e-12:
            raise GeometryError("RIS direction must be a unit vector")
        if int(self.num_elements) != self.num_elements or self.num_elements < 1:
            raise GeometryError("RIS needs at least one element")
        if not self.spacing > 0:
            raise GeometryError("RIS element spacing must be positive")

    @property
    def aperture(self) -> float:
        """Full array length N*d (element-cell convention)."""
        return self.num_elements * self.spacing

    @property
    def span(self) -> float:
        """Distance between the first and last element centres, (N-1)*d."""
        return (self.num_elements - 1) * self.spacing


@dataclass(frozen=True)
class Target:
    position: Vec2
    reflectivity: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec2(self.position))
        refl = complex(self.reflectivity)
        if not (math.isfinite(refl.real) and math.isfinite(refl.imag)):
            raise GeometryError("target reflectivity must be finite")
        object.__setattr__(self, "reflectivity", refl)


@dataclass(frozen=True)
class Scene:
    radar: Vec2
    ris: RisArray
    targets: tuple[Target, ...] = field(default_factory=tuple)
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self):
        object.__setattr__(self, "radar", as_vec2(self.radar))
        object.__setattr__(self, "targets", tuple(self.targets))
        if not self.speed_of_light > 0:
            raise GeometryError("speed of light must be positive")
        gaps = np.linalg.norm(element_positions(self.ris) - np.asarray(self.radar), axis=1)
        if np.any(gaps == 0.0):
            raise GeometryError("radar coincides with a RIS element")

    def with_targets(self, targets) -> "Scene":
        return Scene(self.radar, self.ris, tuple(targets), self.speed_of_light)


def element_positions(ris: RisArray) -> np.ndarray:
    """Element centres as an (N, 2) array, ordered along ``ris.direction``."""
    offsets = (np.arange(ris.num_elements) - (ris.num_elements - 1) / 2.0) * ris.spacing
    return np.asarray(ris.center)[None, :] + offsets[:, None] * np.asarray(ris.direction)[None, :]


def mirror_point(p, ris: RisArray) -> Vec2:
    """Reflect ``p`` across the infinite line carrying the RIS (the image source)."""
    c = np.asarray(ris.center)
    u = np.asarray(ris.direction)
    v = np.asarray(p, dtype=float) - c
    along = (v @ u) * u
    return Vec2(*(c + 2.0 * along - v))


def path_length(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])
