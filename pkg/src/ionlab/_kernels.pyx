# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Numerov kernels.

Same contracts as ``_kernels_py``; see that module for the recurrence and
the rescaling guard. These loops dominate the runtime of the mean-field
solver, hence the compiled fast path.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double _SEED = 1e-12
cdef double _BIG = 1e250
cdef double _SHRINK = 1e-250


def numerov_count_nodes(g, double h):
    """Count sign changes of the outward solution of v'' = g v."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ga = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t n = ga.shape[0]
    cdef double hh12 = h * h / 12.0
    cdef double p_prev = 1.0 - hh12 * ga[0]
    cdef double p_cur = 1.0 - hh12 * ga[1]
    cdef double v_prev = _SEED
    cdef double v_cur = _SEED * np.exp(0.5 * h)
    cdef double p_next, v_next
    cdef int nodes = 0
    cdef Py_ssize_t i
    for i in range(1, n - 1):
        p_next = 1.0 - hh12 * ga[i + 1]
        v_next = ((12.0 - 10.0 * p_cur) * v_cur - p_prev * v_prev) / p_next
        if v_next * v_cur < 0.0:
            nodes += 1
        v_prev = v_cur
        v_cur = v_next
        p_prev = p_cur
        p_cur = p_next
        if v_cur > _BIG or v_cur < -_BIG:
            v_prev *= _SHRINK
            v_cur *= _SHRINK
    return nodes


def numerov_outward(g, double h, Py_ssize_t iend):
    """Outward solution on nodes 0..iend, seeded on the regular branch."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ga = np.ascontiguousarray(g, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.zeros(iend + 1, dtype=np.float64)
    cdef double hh12 = h * h / 12.0
    cdef double p_prev, p_cur, p_next
    cdef Py_ssize_t i, k
    v[0] = _SEED
    v[1] = _SEED * np.exp(0.5 * h)
    for i in range(1, iend):
        p_next = 1.0 - hh12 * ga[i + 1]
        p_cur = 1.0 - hh12 * ga[i]
        p_prev = 1.0 - hh12 * ga[i - 1]
        v[i + 1] = ((12.0 - 10.0 * p_cur) * v[i] - p_prev * v[i - 1]) / p_next
        if v[i + 1] > _BIG or v[i + 1] < -_BIG:
            for k in range(i + 2):
                v[k] *= _SHRINK
    return v


def numerov_inward(g, double h, Py_ssize_t istart):
    """Inward solution on nodes istart..n-1 with a Dirichlet seed at the end."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ga = np.ascontiguousarray(g, dtype=np.float64)
    cdef Py_ssize_t n = ga.shape[0]
    cdef Py_ssize_t m = n - istart
    cdef cnp.ndarray[cnp.float64_t, ndim=1] v = np.zeros(m, dtype=np.float64)
    cdef double hh12 = h * h / 12.0
    cdef double p_prev, p_cur, p_next
    cdef Py_ssize_t i, j, k
    v[m - 1] = 0.0
    v[m - 2] = _SEED
    for i in range(n - 2, istart, -1):
        j = i - istart
        p_prev = 1.0 - hh12 * ga[i - 1]
        p_cur = 1.0 - hh12 * ga[i]
        p_next = 1.0 - hh12 * ga[i + 1]
        v[j - 1] = ((12.0 - 10.0 * p_cur) * v[j] - p_next * v[j + 1]) / p_prev
        if v[j - 1] > _BIG or v[j - 1] < -_BIG:
            for k in range(j - 1, m):
                v[k] *= _SHRINK
    return v
