# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled O(N^2) history sums for fractional time stepping."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def gl_weights(double alpha, Py_ssize_t count):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(count, dtype=np.float64)
    cdef double[::1] wv = w
    cdef Py_ssize_t j
    if count == 0:
        return w
    wv[0] = 1.0
    for j in range(1, count):
        wv[j] = wv[j - 1] * (1.0 - (alpha + 1.0) / j)
    return w


cdef void _axpy_shifted(double* out, const double* x, double a, Py_ssize_t shift, Py_ssize_t n) noexcept nogil:
    # out[shift:n] += a * x[0:n-shift]; independent lanes, so the C compiler vectorises it
    cdef Py_ssize_t k
    for k in range(shift, n):
        out[k] += a * x[k - shift]


def causal_convolve(const double[::1] u, const double[::1] w):
    # terms are accumulated in increasing j, the same order as the direct sum
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t j
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] ov = out
    if n == 0:
        return out
    with nogil:
        for j in range(n):
            _axpy_shifted(&ov[0], &u[0], w[j], j, n)
    return out


def l1_history(const double[::1] u, const double[::1] b):
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t k, j
    out = np.zeros(n, dtype=np.float64)
    if n < 2:
        return out
    du = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] dv = du
    dv[0] = 0.0
    for k in range(1, n):
        dv[k] = u[k] - u[k - 1]
    # out[k] = sum_{j<k} b[j] du[k-j]
    with nogil:
        for j in range(n - 1):
            _axpy_shifted(&ov[0], &dv[0], b[j], j, n)
    return out


def toeplitz_march(const double[::1] w, const double[::1] f):
    # once u[k] is known its contribution is pushed into every later row
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t k, m
    cdef double w0 = w[0]
    cdef double uk
    rest = np.array(f, dtype=np.float64, copy=True)
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] rv = rest
    cdef double[::1] uv = out
    with nogil:
        for k in range(n):
            uk = rv[k] / w0
            uv[k] = uk
            for m in range(k + 1, n):
                rv[m] -= w[m - k] * uk
    return out
