# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory integration kernel.

Same contract as ``_pure.rk4_path``; the batch and time loops run in C with
stack-allocated work buffers (state dimension capped at 64).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport tanh as c_tanh

cnp.import_array()

BACKEND_NAME = "compiled"

DEF MAX_DIM = 64


cdef inline void _rate(const double* y, const double[:, ::1] g, Py_ssize_t n,
                       bint tanh_variant, double beta, double* out) noexcept nogil:
    cdef double f[MAX_DIM]
    cdef double t[MAX_DIM]
    cdef double fbar = 0.0
    cdef double s = 0.0
    cdef Py_ssize_t i, j
    for i in range(n):
        f[i] = 0.0
        for j in range(n):
            f[i] += g[i, j] * y[j]
    for i in range(n):
        fbar += y[i] * f[i]
    if tanh_variant:
        for i in range(n):
            t[i] = c_tanh(beta * (f[i] - fbar))
        for i in range(n):
            s += y[i] * t[i]
        for i in range(n):
            out[i] = y[i] * (t[i] - s)
    else:
        for i in range(n):
            out[i] = y[i] * (f[i] - fbar)


def rk4_path(x0s, gamma, double dt, long n_steps, long record_stride,
             bint tanh_variant, double beta, double clip_tol):
    """Integrate a (M, N) batch of states for ``n_steps`` steps.

    Returns ``(records, abort_step, abort_sample)``; see ``_pure.rk4_path``.
    """
    x_arr = np.ascontiguousarray(x0s, dtype=np.float64)
    g_arr = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef double[:, ::1] x = x_arr.copy()
    cdef const double[:, ::1] g = g_arr
    cdef Py_ssize_t m = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    if n > MAX_DIM:
        raise ValueError(f"state dimension {n} exceeds kernel limit {MAX_DIM}")

    cdef long n_rec = n_steps // record_stride
    cdef bint extra_final = (n_steps % record_stride) != 0
    rec_arr = np.empty((1 + n_rec + (1 if extra_final else 0), m, n), dtype=np.float64)
    cdef double[:, :, ::1] records = rec_arr
    cdef Py_ssize_t rec = 0
    cdef Py_ssize_t i, j, sample
    cdef long step
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    cdef double y[MAX_DIM]
    cdef double k1[MAX_DIM]
    cdef double k2[MAX_DIM]
    cdef double k3[MAX_DIM]
    cdef double k4[MAX_DIM]
    cdef double total, mn
    cdef long abort_step = -1
    cdef Py_ssize_t abort_sample = -1

    for i in range(m):
        for j in range(n):
            records[0, i, j] = x[i, j]

    with nogil:
        for step in range(1, n_steps + 1):
            for sample in range(m):
                _rate(&x[sample, 0], g, n, tanh_variant, beta, k1)
                for j in range(n):
                    y[j] = x[sample, j] + half * k1[j]
                _rate(y, g, n, tanh_variant, beta, k2)
                for j in range(n):
                    y[j] = x[sample, j] + half * k2[j]
                _rate(y, g, n, tanh_variant, beta, k3)
                for j in range(n):
                    y[j] = x[sample, j] + dt * k3[j]
                _rate(y, g, n, tanh_variant, beta, k4)
                total = 0.0
                mn = 0.0
                for j in range(n):
                    y[j] = x[sample, j] + sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
                    if y[j] < mn:
                        mn = y[j]
                if mn < -clip_tol:
                    abort_step = step
                    abort_sample = sample
                    for j in range(n):
                        x[sample, j] = y[j]
                    break
                for j in range(n):
                    if y[j] < 0.0:
                        y[j] = 0.0
                    total += y[j]
                for j in range(n):
                    x[sample, j] = y[j] / total
            if abort_step >= 0:
                break
            if step % record_stride == 0:
                rec += 1
                for i in range(m):
                    for j in range(n):
                        records[rec, i, j] = x[i, j]
        if abort_step < 0 and extra_final:
            rec += 1
            for i in range(m):
                for j in range(n):
                    records[rec, i, j] = x[i, j]

    if abort_step >= 0:
        return rec_arr[: rec + 1], abort_step, abort_sample
    return rec_arr, -1, -1
