"""Backend selection for the backprojection inner loop.

The compiled extension is used when it was built and imports cleanly, unless
``VIRTUAL_APERTURE_BACKEND=python`` is set. Both backends agree to ~1e-12
relative; only the compiled one assumes an affine wavenumber grid, and the
dispatcher falls back to numpy when that does not hold.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKEND = "compiled" if _compiled is not None and os.environ.get("VIRTUAL_APERTURE_BACKEND") != "python" else "python"


def _affine(k: np.ndarray):
    if len(k) == 1:
        return float(k[0]), 0.0
    dk = (k[-1] - k[0]) / (len(k) - 1)
    ideal = k[0] + dk * np.arange(len(k))
    if np.allclose(k, ideal, rtol=1e-13, atol=0.0):
        return float(k[0]), float(dk)
    return None


def correlate(zt, k, paths, backend: str | None = None) -> np.ndarray:
    """Sum ``zt[c, i] * exp(+1j * k[i] * paths[p, c])`` over channels and samples.

    ``zt`` is ``(C, I)`` complex, ``k`` has length ``I`` and ``paths`` is
    ``(P, C)`` in metres. Returns ``P`` complex values.
    """
    backend = backend or BACKEND
    zt = np.ascontiguousarray(zt, dtype=complex)
    k = np.asarray(k, dtype=float)
    paths = np.ascontiguousarray(paths, dtype=float)
    if paths.ndim != 2 or zt.ndim != 2 or paths.shape[1] != zt.shape[0] or zt.shape[1] != len(k):
        raise ValueError(f"shape mismatch: zt {zt.shape}, k {k.shape}, paths {paths.shape}")
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled backend requested but the extension is not built")
        affine = _affine(k)
        if affine is not None:
            return _compiled.correlate(zt, affine[0], affine[1], paths)
    return _fallback.correlate(zt, k, paths)
