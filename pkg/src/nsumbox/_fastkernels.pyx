# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(q) matrix kernels: modular arithmetic for prime fields and
table-driven arithmetic for small extension fields.

Mirrors nsumbox.kernels.pure exactly (same pivoting order, same outputs).
"""

import numpy as np


cdef long long _pow_mod(long long a, long long e, long long p) noexcept:
    cdef long long out = 1
    a %= p
    while e:
        if e & 1:
            out = (out * a) % p
        a = (a * a) % p
        e >>= 1
    return out


def matmul_prime(const long long[:, ::1] a, const long long[:, ::1] b, long long p):
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    out_arr = np.zeros((n, m), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, l
    cdef long long acc
    for i in range(n):
        for j in range(m):
            acc = 0
            for l in range(k):
                acc = (acc + a[i, l] * b[l, j]) % p
            out[i, j] = acc
    return out_arr


def matmul_table(const long long[:, ::1] a, const long long[:, ::1] b,
                 const long long[:, ::1] add_t, const long long[:, ::1] mul_t):
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    out_arr = np.zeros((n, m), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, l
    cdef long long acc
    for i in range(n):
        for j in range(m):
            acc = 0
            for l in range(k):
                acc = add_t[acc, mul_t[a[i, l], b[l, j]]]
            out[i, j] = acc
    return out_arr


def rref_prime(const long long[:, ::1] a_in, long long p):
    cdef Py_ssize_t n = a_in.shape[0], m = a_in.shape[1]
    r_arr = np.array(a_in, dtype=np.int64)
    t_arr = np.eye(n, dtype=np.int64)
    cdef long long[:, ::1] r = r_arr
    cdef long long[:, ::1] t = t_arr
    pivots = []
    cdef Py_ssize_t row = 0, col, i, j, sel
    cdef long long c, f, tmp
    for col in range(m):
        if row >= n:
            break
        sel = -1
        for i in range(row, n):
            if r[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != row:
            for j in range(m):
                tmp = r[row, j]; r[row, j] = r[sel, j]; r[sel, j] = tmp
            for j in range(n):
                tmp = t[row, j]; t[row, j] = t[sel, j]; t[sel, j] = tmp
        if r[row, col] != 1:
            c = _pow_mod(r[row, col], p - 2, p)
            for j in range(m):
                r[row, j] = (r[row, j] * c) % p
            for j in range(n):
                t[row, j] = (t[row, j] * c) % p
        for i in range(n):
            if i != row and r[i, col] != 0:
                f = (p - r[i, col]) % p
                for j in range(m):
                    r[i, j] = (r[i, j] + f * r[row, j]) % p
                for j in range(n):
                    t[i, j] = (t[i, j] + f * t[row, j]) % p
        pivots.append(col)
        row += 1
    return r_arr, t_arr, pivots


def rref_table(const long long[:, ::1] a_in,
               const long long[:, ::1] add_t, const long long[:, ::1] mul_t,
               const long long[::1] neg_t, const long long[::1] inv_t):
    cdef Py_ssize_t n = a_in.shape[0], m = a_in.shape[1]
    r_arr = np.array(a_in, dtype=np.int64)
    t_arr = np.eye(n, dtype=np.int64)
    cdef long long[:, ::1] r = r_arr
    cdef long long[:, ::1] t = t_arr
    pivots = []
    cdef Py_ssize_t row = 0, col, i, j, sel
    cdef long long c, f, tmp
    for col in range(m):
        if row >= n:
            break
        sel = -1
        for i in range(row, n):
            if r[i, col] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != row:
            for j in range(m):
                tmp = r[row, j]; r[row, j] = r[sel, j]; r[sel, j] = tmp
            for j in range(n):
                tmp = t[row, j]; t[row, j] = t[sel, j]; t[sel, j] = tmp
        if r[row, col] != 1:
            c = inv_t[r[row, col]]
            for j in range(m):
                r[row, j] = mul_t[r[row, j], c]
            for j in range(n):
                t[row, j] = mul_t[t[row, j], c]
        for i in range(n):
            if i != row and r[i, col] != 0:
                f = neg_t[r[i, col]]
                for j in range(m):
                    r[i, j] = add_t[r[i, j], mul_t[f, r[row, j]]]
                for j in range(n):
                    t[i, j] = add_t[t[i, j], mul_t[f, t[row, j]]]
        pivots.append(col)
        row += 1
    return r_arr, t_arr, pivots
