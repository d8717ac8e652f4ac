# Compiled backprojection kernel; kernels.py dispatches to it.
# Phasors advance by a rotation per sample and are re-seeded exactly every 64.
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

def correlate(const double complex[:, ::1] zt, double k0, double dk, const double[:, ::1] paths):
    """out[p] = sum_c sum_i zt[c, i] * exp(1j * (k0 + i*dk) * paths[p, c]).

    Each output is accumulated channel-by-channel, sample-by-sample, so the
    result for a point does not depend on which other points share the call.
    """
    cdef Py_ssize_t nchan = zt.shape[0]
    cdef Py_ssize_t nsamp = zt.shape[1]
    cdef Py_ssize_t npts = paths.shape[0]
    if paths.shape[1] != nchan:
        raise ValueError("paths and zt disagree on the channel count")
    out = np.zeros(npts, dtype=np.complex128)
    cdef double complex[::1] res = out
    cdef Py_ssize_t p, c, i
    cdef Py_ssize_t reseed = 64
    cdef double L, ph, acc_re, acc_im, cur_re, cur_im, rot_re, rot_im, t, zr, zi
    with nogil:
        for p in range(npts):
            acc_re = 0.0
            acc_im = 0.0
            for c in range(nchan):
                L = paths[p, c]
                rot_re = cos(dk * L)
                rot_im = sin(dk * L)
                for i in range(nsamp):
                    if i % reseed == 0:
                        ph = (k0 + i * dk) * L
                        cur_re = cos(ph)
                        cur_im = sin(ph)
                    zr = zt[c, i].real
                    zi = zt[c, i].imag
                    acc_re = acc_re + zr * cur_re - zi * cur_im
                    acc_im = acc_im + zr * cur_im + zi * cur_re
                    t = cur_re * rot_re - cur_im * rot_im
                    cur_im = cur_re * rot_im + cur_im * rot_re
                    cur_re = t
            res[p] = acc_re + 1j * acc_im
    return out
