"""Pure numpy/Python fallback kernels for GF(q) dense matrix algebra.

Same contracts as the compiled core: operands are 2-D int64 arrays of
canonical encodings, elimination order is fixed (columns left to right,
first nonzero row top-down), so results are bit-identical across backends.
"""

from __future__ import annotations

import numpy as np

from ..gf import FieldParams

_INT64_SAFE = 2**62


def _vec_add(field: FieldParams, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    if field.r == 1:
        return (u + v) % field.p
    if field._add_t is not None:
        return field._add_t[u, v]
    return _digit_mod(field, u + np.zeros_like(v), v)


def _digit_mod(field: FieldParams, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # digitwise base-p addition of encodings, any extension field
    p, r = field.p, field.r
    out = np.zeros(np.broadcast(u, v).shape, dtype=np.int64)
    mult = 1
    uu, vv = u.copy(), v.copy()
    for _ in range(r):
        out += ((uu + vv) % p) * mult
        uu //= p
        vv //= p
        mult *= p
    return out

def _vec_neg(field: FieldParams, u: np.ndarray) -> np.ndarray:
    if field.r == 1:
        return (-u) % field.p
    if field._neg_t is not None:
        return field._neg_t[u]
    p, r = field.p, field.r
    out = np.zeros_like(u)
    mult = 1
    uu = u.copy()
    for _ in range(r):
        out += ((-uu) % p) * mult
        uu //= p
        mult *= p
    return out


def _vec_mul(field: FieldParams, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    if field.r == 1:
        return (u * v) % field.p
    if field._mul_t is not None:
        return field._mul_t[u, v]
    field._build_logs()
    if field._exp is not None:
        exp_, log_ = field._exp, field._log
        u, v = np.broadcast_arrays(u, v)
        out = np.zeros(u.shape, dtype=np.int64)
        nz = (u != 0) & (v != 0)
        out[nz] = exp_[(log_[u[nz]] + log_[v[nz]]) % (field.q - 1)]
        return out
    flat_u, flat_v = np.broadcast_arrays(u, v)
    out = np.array(
        [field.mul(int(a), int(b)) for a, b in zip(flat_u.ravel(), flat_v.ravel())],
        dtype=np.int64,
    )
    return out.reshape(flat_u.shape)


def _want_tables(field: FieldParams) -> None:
    if field.r > 1 and field.q <= 512 and field._mul_t is None:
        field.build_tables()


def matmul(field: FieldParams, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _want_tables(field)
    n, k = a.shape
    k2, m = b.shape
    assert k == k2
    if field.r == 1:
        p = field.p
        if k * (p - 1) * (p - 1) < _INT64_SAFE:
            return (a @ b) % p
        return np.array(
            (a.astype(object) @ b.astype(object)) % p, dtype=np.int64
        )
    if k == 0 or n == 0 or m == 0:
        return np.zeros((n, m), dtype=np.int64)
    prods = _vec_mul(field, a[:, :, None], b[None, :, :])  # n x k x m
    if field._add_t is not None:
        acc = prods[:, 0, :]
        for i in range(1, k):
            acc = field._add_t[acc, prods[:, i, :]]
        return acc
    # componentwise base-p digits: the k-fold sum reduces digitwise mod p
    p, r = field.p, field.r
    acc = np.zeros((n, m), dtype=np.int64)
    mult = 1
    tmp = prods.copy()
    for _ in range(r):
        acc += (tmp % p).sum(axis=1) % p * mult
        tmp //= p
        mult *= p
    return acc


def rref(field: FieldParams, a: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Gauss-Jordan: returns (rref, transform, pivot columns), transform @ a = rref."""
    _want_tables(field)
    n, m = a.shape
    r = a.astype(np.int64).copy()
    t = np.eye(n, dtype=np.int64)
    pivots: list[int] = []
    row = 0
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
            r[[row, sel]] = r[[sel, row]]
            t[[row, sel]] = t[[sel, row]]
        piv = int(r[row, col])
        if piv != 1:
            c = field.inv(piv)
            r[row] = _vec_mul(field, r[row], np.int64(c))
            t[row] = _vec_mul(field, t[row], np.int64(c))
        for i in range(n):
            if i != row and r[i, col] != 0:
                f = _vec_neg(field, np.int64(r[i, col]))
                r[i] = _vec_add(field, r[i], _vec_mul(field, r[row], f))
                t[i] = _vec_add(field, t[i], _vec_mul(field, t[row], f))
        pivots.append(col)
        row += 1
    return r, t, pivots
