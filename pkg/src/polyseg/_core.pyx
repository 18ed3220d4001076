# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the scanline/statistics kernels in ``_core_py``.

Crossing coordinates are evaluated with the exact same floating-point
expressions as the NumPy fallback so masks agree bit for bit; see the
semantics notes in ``polyseg._core_py``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil
from libc.stdlib cimport free, malloc

cnp.import_array()


cdef inline void _insort(double* buf, int n, double v) noexcept nogil:
    cdef int j = n
    while j > 0 and buf[j - 1] > v:
        buf[j] = buf[j - 1]
        j -= 1
    buf[j] = v


def fill_mask(object xs_obj, object ys_obj, int width, int height):
    """Even-odd scanline fill of a closed polygon over pixel centers."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(xs_obj, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ys = np.ascontiguousarray(ys_obj, dtype=np.float64)
    cdef int n = xs.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] mask = np.zeros((height, width), dtype=np.uint8)
    cdef double* cross = <double*> malloc(n * sizeof(double))
    if cross == NULL:
        raise MemoryError()
    cdef int r, i, j, cnt, k, ca, cb, c
    cdef double x1, y1, x2, y2, ylo, yhi, xc
    try:
        with nogil:
            for r in range(height):
                cnt = 0
                for i in range(n):
                    j = i + 1
                    if j == n:
                        j = 0
                    x1 = xs[i]; y1 = ys[i]
                    x2 = xs[j]; y2 = ys[j]
                    if y1 == y2:
                        continue
                    if y1 < y2:
                        ylo = y1; yhi = y2
                    else:
                        ylo = y2; yhi = y1
                    if ylo <= r and r < yhi:
                        xc = x1 + (r - y1) * (x2 - x1) / (y2 - y1)
                        _insort(cross, cnt, xc)
                        cnt += 1
                for k in range(0, cnt - 1, 2):
                    ca = <int> ceil(cross[k])
                    cb = <int> ceil(cross[k + 1])
                    if ca < 0:
                        ca = 0
                    if cb > width:
                        cb = width
                    for c in range(ca, cb):
                        mask[r, c] = 1
    finally:
        free(cross)
    return mask


def mask_stats(object data_obj, object mask_obj):
    """Region moments of (H, W, C) data split by a uint8 mask."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3] data = np.ascontiguousarray(data_obj, dtype=np.float64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] mask = np.ascontiguousarray(mask_obj, dtype=np.uint8)
    cdef int h = data.shape[0], w = data.shape[1], c = data.shape[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s1_in = np.zeros(c)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s2_in = np.zeros(c)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s1_all = np.zeros(c)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s2_all = np.zeros(c)
    cdef double area_in = 0.0, v
    cdef int r, col, ch
    cdef bint inside
    with nogil:
        for r in range(h):
            for col in range(w):
                inside = mask[r, col] != 0
                if inside:
                    area_in += 1.0
                for ch in range(c):
                    v = data[r, col, ch]
                    s1_all[ch] += v
                    s2_all[ch] += v * v
                    if inside:
                        s1_in[ch] += v
                        s2_in[ch] += v * v
    return area_in, s1_in, s2_in, s1_all, s2_all


def ss_stats(object prefix1_obj, object prefix2_obj, object xs_obj, object ys_obj, int factor):
    """Fractional region sums of a polygon over the subsample grid."""
    cdef cnp.ndarray[cnp.float64_t, ndim=3] prefix1 = np.ascontiguousarray(prefix1_obj, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] prefix2 = np.ascontiguousarray(prefix2_obj, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(xs_obj, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ys = np.ascontiguousarray(ys_obj, dtype=np.float64)
    cdef int n = xs.shape[0]
    cdef int hs = prefix1.shape[0], wcols = prefix1.shape[1], c = prefix1.shape[2]
    cdef int ws = wcols - 1
    cdef double f = <double> factor
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s1 = np.zeros(c)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] s2 = np.zeros(c)
    cdef double nsub = 0.0
    cdef double* cross = <double*> malloc(n * sizeof(double))
    if cross == NULL:
        raise MemoryError()
    cdef int sr, i, j, cnt, k, ca, cb, ch
    cdef double x1, y1, x2, y2, ylo, yhi, xc, ysub
    cdef bint broken = False
    try:
        with nogil:
            for sr in range(hs):
                ysub = (sr + 0.5) / f - 0.5
                cnt = 0
                for i in range(n):
                    j = i + 1
                    if j == n:
                        j = 0
                    x1 = xs[i]; y1 = ys[i]
                    x2 = xs[j]; y2 = ys[j]
                    if y1 == y2:
                        continue
                    if y1 < y2:
                        ylo = y1; yhi = y2
                    else:
                        ylo = y2; yhi = y1
                    if ylo <= ysub and ysub < yhi:
                        xc = x1 + (ysub - y1) * (x2 - x1) / (y2 - y1)
                        _insort(cross, cnt, xc)
                        cnt += 1
                if cnt & 1:
                    broken = True
                    break
                for k in range(0, cnt - 1, 2):
                    ca = <int> ceil(f * (cross[k] + 0.5) - 0.5)
                    cb = <int> ceil(f * (cross[k + 1] + 0.5) - 0.5)
                    if ca < 0:
                        ca = 0
                    elif ca > ws:
                        ca = ws
                    if cb < 0:
                        cb = 0
                    elif cb > ws:
                        cb = ws
                    nsub += cb - ca
                    for ch in range(c):
                        s1[ch] += prefix1[sr, cb, ch] - prefix1[sr, ca, ch]
                        s2[ch] += prefix2[sr, cb, ch] - prefix2[sr, ca, ch]
    finally:
        free(cross)
    if broken:
        raise RuntimeError("scanline crossing parity broken")
    return nsub, s1, s2
