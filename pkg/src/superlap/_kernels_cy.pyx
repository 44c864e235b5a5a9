# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the pairwise kernel reductions.

Semantics mirror ``superlap._kernels_np`` exactly; see that module for the
reduction formulas.  The power maps are specialized for the common
exponents (3/2, 2, 3) where libm pow would otherwise dominate the loop.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()


cdef inline double _pw(double x, double p) nogil:
    cdef double a
    if p == 2.0:
        return x * x
    a = fabs(x)
    if p == 3.0:
        return a * x * x
    if p == 1.5:
        return a * sqrt(a)
    return pow(a, p)


cdef inline double _phi(double x, double p) nogil:
    cdef double a
    if p == 2.0:
        return x
    a = fabs(x)
    if p == 3.0:
        return x * a
    if p == 1.5:
        return 0.0 if a == 0.0 else x / sqrt(a)
    a = pow(a, p - 1.0)
    return -a if x < 0.0 else a


def pairwise_weights(double[:, ::1] centers, double h, double expo):
    cdef Py_ssize_t n = centers.shape[0]
    cdef Py_ssize_t dim = centers.shape[1]
    cdef double h2n = pow(h, 2.0 * dim)
    out = np.zeros((n, n))
    cdef double[:, ::1] w = out
    cdef Py_ssize_t i, j, a
    cdef double d2, diff, val
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d2 = 0.0
                for a in range(dim):
                    diff = centers[i, a] - centers[j, a]
                    d2 += diff * diff
                val = h2n * pow(sqrt(d2), -expo)
                w[i, j] = val
                w[j, i] = val
    return out


def seminorm_power(double[:, ::1] weights, double[::1] tail, double cell,
                   double[::1] u, double p):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, tacc = 0.0, ui
    with nogil:
        for i in range(n):
            ui = u[i]
            for j in range(i + 1, n):
                acc += weights[i, j] * _pw(ui - u[j], p)
            tacc += tail[i] * _pw(ui, p)
    return 2.0 * acc + 2.0 * cell * tacc


def pairing_power(double[:, ::1] weights, double[::1] tail, double cell,
                  double[::1] u, double[::1] v, double p):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc = 0.0, tacc = 0.0, ui, vi
    with nogil:
        for i in range(n):
            ui = u[i]
            vi = v[i]
            for j in range(n):
                if j != i:
                    acc += weights[i, j] * _phi(ui - u[j], p) * (vi - v[j])
            tacc += tail[i] * _phi(ui, p) * vi
    return acc + 2.0 * cell * tacc


def dual_power(double[:, ::1] weights, double[::1] tail, double cell,
               double[::1] u, double p):
    cdef Py_ssize_t n = u.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc, ui
    with nogil:
        for i in range(n):
            acc = 0.0
            ui = u[i]
            for j in range(n):
                if j != i:
                    acc += weights[i, j] * _phi(ui - u[j], p)
            o[i] = 2.0 * acc + 2.0 * cell * tail[i] * _phi(ui, p)
    return out
