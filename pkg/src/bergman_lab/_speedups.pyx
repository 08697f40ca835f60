# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled signed-distance kernel for batches of query points."""

import numpy as np

from libc.math cimport sqrt

BACKEND_NAME = "compiled"


def sd_batch(double[::1] re, double[::1] im,
             double oc_re, double oc_im, double orad,
             double[::1] hre, double[::1] him, double[::1] hr,
             double[::1] pre, double[::1] pim):
    """Signed distance (positive inside) and nearest-component code per point.

    Component codes: 0 outer circle, 1..H hole index+1, H+1..H+P puncture.
    """
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t nh = hre.shape[0]
    cdef Py_ssize_t npt = pre.shape[0]
    vals = np.empty(n, dtype=np.float64)
    comps = np.empty(n, dtype=np.int64)
    cdef double[::1] v = vals
    cdef long long[::1] c = comps
    cdef Py_ssize_t i, l
    cdef double best, d, dx, dy
    cdef long long bc
    for i in range(n):
        dx = re[i] - oc_re
        dy = im[i] - oc_im
        best = orad - sqrt(dx * dx + dy * dy)
        bc = 0
        for l in range(nh):
            dx = re[i] - hre[l]
            dy = im[i] - him[l]
            d = sqrt(dx * dx + dy * dy) - hr[l]
            if d < best:
                best = d
                bc = l + 1
        for l in range(npt):
            dx = re[i] - pre[l]
            dy = im[i] - pim[l]
            d = sqrt(dx * dx + dy * dy)
            if d < best:
                best = d
                bc = nh + 1 + l
        v[i] = best
        c[i] = bc
    return vals, comps
