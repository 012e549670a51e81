"""Shared seeded generators for randomized property tests."""

from __future__ import annotations

import numpy as np
import pytest

from nsumbox import MatrixFq, make_field
from nsumbox.matfq import mat_rank
from nsumbox.symplectic import LitTransform, is_sso, swap_lit


def random_matrix(field, rows, cols, rng) -> MatrixFq:
    return MatrixFq(field, rng.integers(0, field.q, size=(rows, cols)))


def random_invertible(field, n, rng) -> MatrixFq:
    while True:
        m = random_matrix(field, n, n, rng)
        if mat_rank(m) == n:
            return m


def random_symmetric(field, n, rng) -> MatrixFq:
    m = random_matrix(field, n, n, rng)
    upper = np.triu(m.encodings())
    return MatrixFq(field, upper + np.triu(upper, 1).T)


def random_lit(field, n, rng) -> LitTransform:
    """Random valid LIT: per-transmitter invertible 2x2 blocks."""
    l1, l2, l3, l4 = [], [], [], []
    for _ in range(n):
        while True:
            a, b, c, d = (int(v) for v in rng.integers(0, field.q, size=4))
            if field.sub(field.mul(a, d), field.mul(b, c)) != 0:
                break
        l1.append(a)
        l2.append(b)
        l3.append(c)
        l4.append(d)
    return LitTransform(field, tuple(l1), tuple(l2), tuple(l3), tuple(l4))


def random_symplectic_lit(field, n, rng) -> LitTransform:
    """Per-transmitter blocks of determinant 1 (these preserve SSO)."""
    l1, l2, l3, l4 = [], [], [], []
    for _ in range(n):
        while True:
            a, b, c = (int(v) for v in rng.integers(0, field.q, size=3))
            if a != 0:
                d = field.mul(field.inv(a), field.add(1, field.mul(b, c)))
                break
            if b != 0 and c != 0:
                c = field.neg(field.inv(b))
                d = int(rng.integers(0, field.q))
                break
        l1.append(a)
        l2.append(b)
        l3.append(c)
        l4.append(d)
    return LitTransform(field, tuple(l1), tuple(l2), tuple(l3), tuple(l4))


def random_sso_transfer(field, n, rng) -> MatrixFq:
    """Random N x 2N matrix whose transpose is SSO.

    P (I | S) with S symmetric is SSO-transposed; determinant-1 local
    blocks and signed swaps preserve that while mixing the left half.
    """
    p = random_invertible(field, n, rng)
    s = random_symmetric(field, n, rng)
    mt = p @ MatrixFq.identity(field, n).hstack(s)
    mt = mt @ random_symplectic_lit(field, n, rng).matrix()
    sigma = [int(v) for v in rng.integers(0, 2, size=n)]
    mt = mt @ swap_lit(field, sigma).matrix()
    assert is_sso(mt.T)
    return mt


def random_sso_generator(field, n, rng) -> MatrixFq:
    """Random SSO 2N x N matrix (stabilizer generators)."""
    return random_sso_transfer(field, n, rng).T


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


GF2 = make_field(2)
GF3 = make_field(3)
GF4 = make_field(2, 2)
GF5 = make_field(5)
GF7 = make_field(7)
GF8 = make_field(2, 3)
GF9 = make_field(3, 2)
