# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""C kernels: typed-loop versions of kernels/pure.py.

Accumulation order matches the pure lane element for element, so results
are bit-identical; only speed differs.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def track_points(tables, symbols, points):
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] tab = \
        np.ascontiguousarray(tables, dtype=np.int32)
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] sym = \
        np.ascontiguousarray(symbols, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] pts = \
        np.asarray(points, dtype=np.int32)
    cdef Py_ssize_t B = sym.shape[0], k = sym.shape[1], m = pts.shape[0]
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] pos = \
        np.empty((B, m), dtype=np.int32)
    cdef Py_ssize_t b, j, c
    cdef cnp.int64_t row
    with nogil:
        for b in range(B):
            for c in range(m):
                pos[b, c] = pts[c]
            for j in range(k):
                row = sym[b, j]
                for c in range(m):
                    pos[b, c] = tab[row, pos[b, c]]
    return pos


def convolve_steps(dist, idx, probs, steps):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d = \
        np.array(dist, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] ix = \
        np.ascontiguousarray(idx, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] p = \
        np.asarray(probs, dtype=np.float64)
    cdef Py_ssize_t m = ix.shape[0], N = ix.shape[1]
    cdef Py_ssize_t s, i, z
    cdef int nsteps = steps
    cdef cnp.ndarray[cnp.float64_t, ndim=1] acc = np.empty(N, dtype=np.float64)
    cdef cnp.float64_t pi
    with nogil:
        for s in range(nsteps):
            pi = p[0]
            for z in range(N):
                acc[z] = pi * d[ix[0, z]]
            for i in range(1, m):
                pi = p[i]
                for z in range(N):
                    acc[z] = acc[z] + pi * d[ix[i, z]]
            for z in range(N):
                d[z] = acc[z]
    return d


def adjacency_apply(f, nbrs):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = \
        np.asarray(f, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode="c"] nb = \
        np.ascontiguousarray(nbrs, dtype=np.int32)
    cdef Py_ssize_t deg = nb.shape[0], N = nb.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(N, dtype=np.float64)
    cdef Py_ssize_t j, x
    cdef cnp.float64_t scale = 1.0 / deg
    with nogil:
        for x in range(N):
            out[x] = v[nb[0, x]]
        for j in range(1, deg):
            for x in range(N):
                out[x] = out[x] + v[nb[j, x]]
        for x in range(N):
            out[x] = out[x] * scale
    return out
