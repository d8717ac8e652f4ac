"""Dechirped FMCW point response, wavenumber sampling and receiver noise."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SPEED_OF_LIGHT


class SignalError(ValueError):
    pass


@dataclass(frozen=True)
class ChirpParams:
    carrier: float = 120e9
    bandwidth: float = 10e9
    duration: float = 1e-6
    num_samples: int = 1024
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.carrier > 0:
            raise SignalError("carrier must be positive")
        if not self.bandwidth >= 0:
            raise SignalError("bandwidth must be non-negative")
        if not self.duration > 0:
            raise SignalError("duration must be positive")
        if int(self.num_samples) != self.num_samples or self.num_samples < 1:
            raise SignalError("num_samples must be a positive integer")
        if not self.amplitude > 0:
            raise SignalError("amplitude must be positive")

    @property
    def chirp_rate(self) -> float:
        return self.bandwidth / self.duration

    def wavelength(self, c: float = SPEED_OF_LIGHT) -> float:
        return c / self.carrier

    def fast_time(self) -> np.ndarray:
        if self.num_samples == 1:
            return np.zeros(1)
        return np.arange(self.num_samples) * (self.duration / (self.num_samples - 1))


@dataclass(frozen=True)
class DataCube:
    """Raw echo matrix, fast time along rows (I) and slow time along columns (M)."""

    samples: np.ndarray
    chirp: ChirpParams

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 2 or s.shape[0] != self.chirp.num_samples:
            raise SignalError(
                f"cube must be I x M with I={self.chirp.num_samples}, got shape {s.shape}"
            )
        if not np.all(np.isfinite(s)):
            raise SignalError("cube contains non-finite samples")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def slow_time_len(self) -> int:
        return self.samples.shape[1]

    def __add__(self, other: "DataCube") -> "DataCube":
        return DataCube(self.samples + other.samples, self.chirp)


def wavenumber_grid(chirp: ChirpParams, c: float = SPEED_OF_LIGHT) -> np.ndarray:
    """k_i = 2*pi*(f_c + gamma*t_i)/c over t in [0, T], endpoints inclusive."""
    if not c > 0:
        raise SignalError("speed of light must be positive")
    t = chirp.fast_time()
    return 2.0 * np.pi * (chirp.carrier + chirp.chirp_rate * t) / c


def point_response(k, R, A: float = 1.0):
    """A*exp(-j*k*R), the dechirped return of a path of length R (RVP dropped)."""
    return A * np.exp(-1j * np.multiply(k, R))


def add_awgn(cube: DataCube, snr_db: float | None, seed: int) -> DataCube:
    """Add circular complex white noise at ``snr_db`` relative to the mean cube power.

    ``snr_db`` of ``None`` or ``+inf`` returns the cube unchanged. Noise is drawn
    from ``numpy.random.default_rng(seed)`` in row-major sample order, real part
    before imaginary part.
    """
    if snr_db is None or snr_db == math.inf:
        return cube
    power = float(np.mean(np.abs(cube.samples) ** 2))
    if power == 0.0:
        raise SignalError("SNR undefined for zero signal")
    variance = power / 10.0 ** (snr_db / 10.0)
    rng = np.random.default_rng(seed)
    draws = rng.standard_normal(cube.samples.shape + (2,))
    noise = (draws[..., 0] + 1j * draws[..., 1]) * math.sqrt(variance / 2.0)
    return DataCube(cube.samples + noise, cube.chirp)
