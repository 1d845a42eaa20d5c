# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled projected-gradient kernels; see ``_kernels_py`` for the algorithm."""
import numpy as np

from libc.math cimport sqrt

cdef double ARMIJO_C = 1e-4
cdef double BACKTRACK = 0.5
cdef double MIN_STEP = 1e-30

cdef enum:
    CONVERGED = 0
    MAX_ITERS = 1
    STALLED = 2
    EMPTY_START = 3


cdef inline void _matvec(const double complex[:, ::1] A, const double complex[::1] x,
                         double complex[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + A[i, j] * x[j]
        out[i] = acc


cdef inline double complex _vdot(const double complex[::1] u, const double complex[::1] v,
                                 Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double complex acc = 0
    for i in range(n):
        acc = acc + u[i].conjugate() * v[i]
    return acc


cdef inline double _norm2(const double complex[::1] v, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0
    for i in range(n):
        acc += v[i].real * v[i].real + v[i].imag * v[i].imag
    return acc


cdef inline void _project_out(double complex[::1] v, const double complex[:, ::1] basis,
                              Py_ssize_t nb, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex c
    for j in range(nb):
        c = _vdot(basis[j], v, n)
        for i in range(n):
            v[i] = v[i] - basis[j, i] * c


cdef int _optimize(const double complex[:, ::1] A, double complex[::1] x,
                   const double complex[:, ::1] basis, Py_ssize_t nb, int sign,
                   double step, double tol, long max_iters,
                   double complex[::1] y, double complex[::1] g, double complex[::1] ag,
                   long* iters_out) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i
    cdef double nrm0 = sqrt(_norm2(x, n))
    cdef double nrm, e, gn2, rho, t, s, gain
    cdef long it
    cdef bint accepted

    _project_out(x, basis, nb, n)
    nrm = sqrt(_norm2(x, n))
    if nrm <= 1e-8 * (nrm0 if nrm0 > 1e-300 else 1e-300):
        for i in range(n):
            x[i] = 0
        iters_out[0] = 0
        return EMPTY_START
    for i in range(n):
        x[i] = x[i] / nrm
    _matvec(A, x, y, n)
    e = _vdot(x, y, n).real
    t = step
    for it in range(max_iters):
        for i in range(n):
            g[i] = y[i] - e * x[i]
        _project_out(g, basis, nb, n)
        gn2 = _norm2(g, n)
        if 2.0 * sqrt(gn2) <= tol:
            iters_out[0] = it
            return CONVERGED
        _matvec(A, g, ag, n)
        rho = _vdot(g, ag, n).real / gn2
        accepted = False
        while t >= MIN_STEP:
            s = sign * t
            gain = (2.0 + s * (rho - e)) / (1.0 + s * s * gn2)
            if gain >= 2.0 * ARMIJO_C:
                accepted = True
                break
            t *= BACKTRACK
        if not accepted:
            iters_out[0] = it
            return STALLED
        s = sign * t
        for i in range(n):
            x[i] = x[i] + s * g[i]
        _project_out(x, basis, nb, n)
        nrm = sqrt(_norm2(x, n))
        for i in range(n):
            x[i] = x[i] / nrm
        _matvec(A, x, y, n)
        e = _vdot(x, y, n).real
        t *= 2.0
    for i in range(n):
        g[i] = y[i] - e * x[i]
    _project_out(g, basis, nb, n)
    iters_out[0] = max_iters
    if 2.0 * sqrt(_norm2(g, n)) <= tol:
        return CONVERGED
    return MAX_ITERS


def optimize(A, x0, basis, long nb, int sign, double step, double tol, long max_iters):
    cdef double complex[:, ::1] A_v = np.ascontiguousarray(A, dtype=complex)
    cdef double complex[::1] x = np.array(x0, dtype=complex)
    cdef double complex[:, ::1] B_v = np.ascontiguousarray(basis, dtype=complex)
    cdef Py_ssize_t n = x.shape[0]
    cdef double complex[::1] y = np.empty(n, dtype=complex)
    cdef double complex[::1] g = np.empty(n, dtype=complex)
    cdef double complex[::1] ag = np.empty(n, dtype=complex)
    cdef long iters = 0
    cdef int status
    with nogil:
        status = _optimize(A_v, x, B_v, nb, sign, step, tol, max_iters, y, g, ag, &iters)
    return np.asarray(x), int(iters), int(status)


def sweeps(A, starts, signs, double step, double tol, long max_iters):
    cdef double complex[:, ::1] A_v = np.ascontiguousarray(A, dtype=complex)
    starts_arr = np.ascontiguousarray(starts, dtype=complex)
    cdef double complex[:, :, ::1] S = starts_arr
    cdef long[::1] sg = np.ascontiguousarray(signs, dtype=np.int_)
    cdef Py_ssize_t R = starts_arr.shape[0]
    cdef Py_ssize_t n = starts_arr.shape[1]
    states_arr = np.zeros((R, n, n), dtype=complex)
    iters_arr = np.zeros((R, n), dtype=np.int64)
    status_arr = np.zeros((R, n), dtype=np.int64)
    cdef double complex[:, :, ::1] X = states_arr
    cdef long long[:, ::1] IT = iters_arr
    cdef long long[:, ::1] ST = status_arr
    cdef double complex[::1] y = np.empty(n, dtype=complex)
    cdef double complex[::1] g = np.empty(n, dtype=complex)
    cdef double complex[::1] ag = np.empty(n, dtype=complex)
    cdef Py_ssize_t r, k, i
    cdef long iters
    cdef int status
    with nogil:
        for r in range(R):
            for k in range(n):
                for i in range(n):
                    X[r, k, i] = S[r, k, i]
                status = _optimize(A_v, X[r, k], X[r], k, <int>sg[r], step, tol,
                                   max_iters, y, g, ag, &iters)
                IT[r, k] = iters
                ST[r, k] = status
    return states_arr, iters_arr, status_arr
