"""Dense matrix algebra tests, including the worked inverse displays."""

import numpy as np
import pytest

from nsumbox import MatrixFq, make_field
from nsumbox.errors import (
    DimMismatchError,
    FieldMismatchError,
    NotAPermutationError,
    SingularMatrixError,
)
from nsumbox.matfq import (
    Inconsistent,
    ParametricSolution,
    UniqueSolution,
    mat_inverse,
    mat_mul,
    mat_rank,
    nullspace_basis,
    permutation_matrix,
    rref_decompose,
    solve_linear,
)
from conftest import GF2, GF3, GF4, GF5, random_invertible, random_matrix


def brute_det2(field, m):
    e = m.encodings()
    return field.sub(
        field.mul(int(e[0, 0]), int(e[1, 1])), field.mul(int(e[0, 1]), int(e[1, 0]))
    )


def test_mat_mul_examples():
    a = MatrixFq(GF2, [[1, 1], [0, 1]])
    b = MatrixFq(GF2, [[1, 0], [1, 1]])
    assert (a @ b).tolist() == [[0, 1], [1, 1]]
    ident = MatrixFq.identity(GF2, 2)
    zero = MatrixFq.zeros(GF2, 2, 2)
    assert ident @ a == a
    assert (a @ zero).is_zero()


def test_mat_mul_errors():
    a = MatrixFq(GF2, [[1, 1], [0, 1]])
    with pytest.raises(DimMismatchError):
        mat_mul(a, MatrixFq(GF2, [[1, 0, 0]]))
    with pytest.raises(FieldMismatchError):
        mat_mul(a, MatrixFq(GF3, [[1, 0], [0, 1]]))


def test_rref_examples():
    ident = MatrixFq.identity(GF3, 3)
    res = rref_decompose(ident)
    assert res.rank == 3 and res.pivots == (0, 1, 2) and res.transform == ident
    assert rref_decompose(MatrixFq.zeros(GF3, 2, 4)).rank == 0
    # det(1 2; 2 1) = 1 - 4 = 0 mod 3
    m = MatrixFq(GF3, [[1, 2], [2, 1]])
    assert brute_det2(GF3, m) == 0
    assert rref_decompose(m).rank == 1


def test_rref_transform_reproduces(rng):
    for field in (GF2, GF3, GF4, GF5):
        for _ in range(25):
            m = random_matrix(field, 4, 6, rng)
            res = rref_decompose(m)
            assert res.transform @ m == res.rref
            assert mat_rank(res.transform) == 4  # invertible


def test_inverse_displays():
    # worked two-qubit example: F = (G | H) for the two-sum box
    f_ex1 = MatrixFq(GF2, [[0, 1, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [1, 0, 0, 1]])
    inv1 = mat_inverse(f_ex1)
    assert inv1.tolist() == [[0, 0, 1, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1]]
    # the (1,2)-box display: same columns with the first two swapped,
    # whose inverse is the displayed matrix
    gperp_h = MatrixFq(GF2, [[1, 0, 1, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 1, 0, 1]])
    assert mat_inverse(gperp_h).tolist() == [
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [1, 1, 0, 0],
        [0, 0, 1, 1],
    ]
    assert mat_inverse(MatrixFq.identity(GF5, 3)) == MatrixFq.identity(GF5, 3)
    assert mat_inverse(MatrixFq.diagonal(GF3, [2, 2])) == MatrixFq.diagonal(GF3, [2, 2])


def test_inverse_involution(rng):
    for field in (GF2, GF3, GF4, GF5):
        for _ in range(100):
            a = random_invertible(field, 3, rng)
            assert mat_inverse(mat_inverse(a)) == a
            assert a @ mat_inverse(a) == MatrixFq.identity(field, 3)


def test_inverse_singular():
    with pytest.raises(SingularMatrixError):
        mat_inverse(MatrixFq(GF3, [[1, 2], [2, 1]]))
    with pytest.raises(DimMismatchError):
        mat_inverse(MatrixFq(GF3, [[1, 2, 0], [2, 1, 1]]))


def test_rank_product_bound(rng):
    for field in (GF2, GF3, GF5):
        for _ in range(50):
            a = random_matrix(field, 4, 3, rng)
            b = random_matrix(field, 3, 5, rng)
            assert mat_rank(a @ b) <= min(mat_rank(a), mat_rank(b))


def test_solve_linear_cases(rng):
    b = random_matrix(GF5, 3, 2, rng)
    sol = solve_linear(MatrixFq.identity(GF5, 3), b)
    assert isinstance(sol, UniqueSolution) and sol.x == b

    zero = MatrixFq.zeros(GF5, 2, 3)
    sol = solve_linear(zero, MatrixFq.zeros(GF5, 2, 1))
    assert isinstance(sol, ParametricSolution)
    assert sol.particular.is_zero()
    assert sol.nullspace == MatrixFq.identity(GF5, 3)

    sol = solve_linear(zero, MatrixFq(GF5, [[1], [0]]))
    assert isinstance(sol, Inconsistent)

    with pytest.raises(DimMismatchError):
        solve_linear(MatrixFq.identity(GF5, 3), MatrixFq.zeros(GF5, 2, 1))


def test_solve_linear_random_consistency(rng):
    for field in (GF3, GF4):
        for _ in range(30):
            a = random_matrix(field, 4, 5, rng)
            x0 = random_matrix(field, 5, 1, rng)
            b = a @ x0
            sol = solve_linear(a, b)
            assert not isinstance(sol, Inconsistent)
            xp = sol.x if isinstance(sol, UniqueSolution) else sol.particular
            assert a @ xp == b
            if isinstance(sol, ParametricSolution):
                assert (a @ sol.nullspace).is_zero()
                ns_rank = mat_rank(sol.nullspace)
                assert ns_rank == sol.nullspace.cols == 5 - mat_rank(a)


def test_nullspace_basis(rng):
    a = random_matrix(GF3, 3, 6, rng)
    ns = nullspace_basis(a)
    assert (a @ ns).is_zero()
    assert mat_rank(ns) == 6 - mat_rank(a)


def test_permutation_matrix():
    assert permutation_matrix(GF3, [0, 1, 2]) == MatrixFq.identity(GF3, 3)
    assert permutation_matrix(GF2, [1, 0]).tolist() == [[0, 1], [1, 0]]
    p = permutation_matrix(GF5, [2, 0, 3, 1])
    assert p @ p.T == MatrixFq.identity(GF5, 4)
    # column j is e_{pi(j)}
    assert p.col(0) == [0, 0, 1, 0]
    with pytest.raises(NotAPermutationError):
        permutation_matrix(GF2, [0, 0])


def test_matrix_construction_guards():
    with pytest.raises(ValueError):
        MatrixFq(GF2, [[2]])
    with pytest.raises(DimMismatchError):
        MatrixFq(GF2, np.zeros(3, dtype=np.int64))
