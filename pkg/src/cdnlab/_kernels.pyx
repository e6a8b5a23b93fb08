# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics mirror cdnlab/_kernels_py.py."""
import numpy as np

from libc.math cimport INFINITY, fabs
from libc.stdlib cimport malloc, free

TOTAL_COST = 0
MAX_RADIUS = 1


def floyd_warshall(double[:, ::1] dist):
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double dik, alt
    with nogil:
        for k in range(n):
            for i in range(n):
                dik = dist[i, k]
                if dik == INFINITY:
                    continue
                for j in range(n):
                    alt = dik + dist[k, j]
                    if alt < dist[i, j]:
                        dist[i, j] = alt


cdef inline bint _better(double value, double best, double rel_tol) nogil:
    if best == INFINITY:
        return value < INFINITY
    return value < best - rel_tol * fabs(best)


cdef double _objective(double* nearest, const double[::1] weights, Py_ssize_t n,
                       int objective) nogil:
    cdef Py_ssize_t j
    cdef double acc = 0.0
    if objective == 0:
        for j in range(n):
            acc += weights[j] * nearest[j]
    else:
        for j in range(n):
            if weights[j] > 0 and nearest[j] > acc:
                acc = nearest[j]
    return acc


def coverage_costs(const double[:, ::1] dist, const double[::1] weights, const double[::1] base_min,
                   candidates, int objective=0):
    cdef const long[::1] cand = np.ascontiguousarray(candidates, dtype=np.int64)
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t m = cand.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] out_v = out
    cdef double* nearest = <double*> malloc(n * sizeof(double))
    cdef Py_ssize_t i, j
    cdef long c
    cdef double d
    if nearest == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                c = cand[i]
                for j in range(n):
                    d = dist[c, j]
                    nearest[j] = d if d < base_min[j] else base_min[j]
                out_v[i] = _objective(nearest, weights, n, objective)
    finally:
        free(nearest)
    return out


def best_subset(const double[:, ::1] dist, const double[::1] weights, const double[::1] base_min,
                candidates, int size, int objective, double rel_tol):
    cdef const long[::1] cand = np.ascontiguousarray(candidates, dtype=np.int64)
    cdef Py_ssize_t n = dist.shape[0]
    cdef Py_ssize_t m = cand.shape[0]
    cdef Py_ssize_t r = size
    cdef Py_ssize_t i, j, level
    cdef double value, d
    cdef double best_value = INFINITY
    cdef long evaluated = 0
    cdef bint found = False
    if r < 1 or r > m:
        raise ValueError("subset size out of range")
    # layer[level] = nearest distances using the first `level` chosen rows
    cdef double* layers = <double*> malloc((r + 1) * n * sizeof(double))
    cdef Py_ssize_t* idx = <Py_ssize_t*> malloc(r * sizeof(Py_ssize_t))
    cdef Py_ssize_t* best = <Py_ssize_t*> malloc(r * sizeof(Py_ssize_t))
    if layers == NULL or idx == NULL or best == NULL:
        free(layers); free(idx); free(best)
        raise MemoryError()
    try:
        with nogil:
            for j in range(n):
                layers[j] = base_min[j]
            for i in range(r):
                idx[i] = i
            level = 0
            while True:
                # rebuild layers from `level` upward for the current combination
                for i in range(level, r):
                    for j in range(n):
                        d = dist[cand[idx[i]], j]
                        value = layers[i * n + j]
                        layers[(i + 1) * n + j] = d if d < value else value
                value = _objective(&layers[r * n], weights, n, objective)
                evaluated += 1
                if not found or _better(value, best_value, rel_tol):
                    found = True
                    best_value = value
                    for i in range(r):
                        best[i] = idx[i]
                # advance to the next lexicographic combination
                i = r - 1
                while i >= 0 and idx[i] == m - r + i:
                    i -= 1
                if i < 0:
                    break
                idx[i] += 1
                for j in range(i + 1, r):
                    idx[j] = idx[j - 1] + 1
                level = i
        combo = tuple(best[i] for i in range(r))
    finally:
        free(layers); free(idx); free(best)
    return combo, best_value, evaluated
