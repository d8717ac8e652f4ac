"""Pure numpy implementation of the backprojection kernel."""

import numpy as np

CHUNK_ELEMENTS = 1 << 21


def correlate(zt, k, paths):
    """out[p] = sum_c sum_i zt[c, i] * exp(1j * k[i] * paths[p, c])."""
    zt = np.asarray(zt, dtype=complex)
    k = np.asarray(k, dtype=float)
    paths = np.asarray(paths, dtype=float)
    nchan, nsamp = zt.shape
    step = max(1, CHUNK_ELEMENTS // (nchan * nsamp))
    out = np.empty(len(paths), dtype=complex)
    for start in range(0, len(paths), step):
        block = paths[start : start + step]
        phasors = np.exp(1j * block[:, :, None] * k[None, None, :])
        out[start : start + step] = np.einsum("ci,pci->p", zt, phasors)
    return out
