"""Symplectic linear algebra over GF(q) for sum-box feasibility.

Provides the block form J = (0, -I; I, 0), symplectic and strongly
self-orthogonal (SSO) predicates, deterministic symplectic completion,
the signed column-swap normalization, standard forms (I | S) with S
symmetric, and the diagonal-rescaling feasibility test for transfer
matrices under local invertible transformations (LITs).

All matrix-level predicates here use full GF(q) arithmetic (entrywise
zero), which is strictly stronger than vanishing of the trace-symplectic
scalar form for extension fields; the scalar form lives in nsumbox.gf.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AlgorithmFailureError,
    BadShapeError,
    DimMismatchError,
    NotALitError,
    NotSelfOrthogonalError,
    NotSSOError,
    NotSymplecticError,
    RankDeficientError,
    SingularMatrixError,
)
from .gf import FieldElement, FieldParams
from .matfq import MatrixFq, mat_inverse, mat_rank, nullspace_basis, rref_decompose, solve_linear, UniqueSolution, ParametricSolution

FEASIBILITY_ENUM_LIMIT = 10**6
FEASIBILITY_SAMPLES = 10**4


def build_J(field: FieldParams, n: int) -> MatrixFq:
    """The 2n x 2n block matrix (0, -I; I, 0)."""
    if n < 1:
        raise DimMismatchError("n must be >= 1")
    out = np.zeros((2 * n, 2 * n), dtype=np.int64)
    neg1 = field.neg(1)
    for i in range(n):
        out[i, n + i] = neg1
        out[n + i, i] = 1
    return MatrixFq(field, out)


def _sprod(field: FieldParams, u: np.ndarray, v: np.ndarray) -> int:
    """u^T J v as a full field value (not traced)."""
    n = len(u) // 2
    acc = 0
    for i in range(n):
        acc = field.add(acc, field.mul(int(u[n + i]), int(v[i])))
        acc = field.sub(acc, field.mul(int(u[i]), int(v[n + i])))
    return acc


def is_symplectic(f: MatrixFq) -> bool:
    """F^T J F == J, exactly."""
    if f.rows != f.cols or f.rows % 2:
        raise DimMismatchError("symplectic matrices are square with even dimension")
    j = build_J(f.field, f.rows // 2)
    return f.T @ j @ f == j


def symplectic_inverse(f: MatrixFq) -> MatrixFq:
    """J^T F^T J; equals the ordinary inverse for symplectic F."""
    if not is_symplectic(f):
        raise NotSymplecticError("input fails F^T J F = J")
    j = build_J(f.field, f.rows // 2)
    return j.T @ f.T @ j


def is_isotropic(g: MatrixFq) -> bool:
    """g^T J g == 0 entrywise (columns pairwise symplectically orthogonal)."""
    if g.rows % 2:
        raise BadShapeError("need an even number of rows")
    j = build_J(g.field, g.rows // 2)
    return (g.T @ j @ g).is_zero()


def is_sso(m: MatrixFq) -> bool:
    """Strong self-orthogonality for a 2N x N matrix: M^T J M = 0 and rank N."""
    if m.rows != 2 * m.cols:
        raise BadShapeError(f"SSO matrices are 2N x N, got {m.shape}")
    return is_isotropic(m) and mat_rank(m) == m.cols


def _check_isotropic_full_rank(g: MatrixFq) -> None:
    if not is_isotropic(g):
        raise NotSelfOrthogonalError("columns are not symplectically self-orthogonal")
    if mat_rank(g) != g.cols:
        raise RankDeficientError(f"columns are dependent (rank < {g.cols})")


def symplectic_complete(g: MatrixFq) -> MatrixFq:
    """Complete self-orthogonal independent columns to a symplectic matrix.

    Symplectic Gram-Schmidt: each given column g_i receives a partner h_i
    with g_j^T J h_i = -delta_ij (solved deterministically, free variables
    zero); remaining pairs are grown from standard basis vectors in index
    order after subtracting their components along existing pairs.  The
    result F satisfies F^T J F = J and has g as its leading columns.
    """
    field = g.field
    if g.rows % 2:
        raise BadShapeError("need an even number of rows")
    n = g.rows // 2
    kappa = g.cols
    if kappa > n:
        raise BadShapeError(f"at most {n} columns can be completed, got {kappa}")
    _check_isotropic_full_rank(g)

    gs: list[np.ndarray] = [g.encodings()[:, i].copy() for i in range(kappa)]
    hs: list[np.ndarray] = []
    j = build_J(field, n)

    def partner(idx: int) -> np.ndarray:
        # constraints: g_k^T J h = -[k == idx], h_k^T J h = 0
        rows, rhs = [], []
        for k, gk in enumerate(gs):
            rows.append((MatrixFq(field, gk.reshape(1, -1)) @ j).encodings()[0])
            rhs.append(field.neg(1) if k == idx else 0)
        for hk in hs:
            rows.append((MatrixFq(field, hk.reshape(1, -1)) @ j).encodings()[0])
            rhs.append(0)
        a = MatrixFq(field, np.asarray(rows, dtype=np.int64))
        b = MatrixFq(field, np.asarray(rhs, dtype=np.int64).reshape(-1, 1))
        sol = solve_linear(a, b)
        if isinstance(sol, UniqueSolution):
            return sol.x.encodings()[:, 0].copy()
        if isinstance(sol, ParametricSolution):
            return sol.particular.encodings()[:, 0].copy()
        raise AssertionError("symplectic pairing system is always solvable")

    for i in range(kappa):
        hs.append(partner(i))

    basis_idx = 0
    while len(gs) < n:
        # next standard basis vector with a nonzero symplectic residual
        while True:
            if basis_idx >= 2 * n:
                raise AssertionError("ran out of basis vectors during completion")
            v = np.zeros(2 * n, dtype=np.int64)
            v[basis_idx] = 1
            basis_idx += 1
            for gk, hk in zip(gs, hs):
                ch = _sprod(field, hk, v)  # component along g_k
                cg = _sprod(field, gk, v)  # component along h_k
                for t in range(2 * n):
                    v[t] = field.sub(int(v[t]), field.mul(ch, int(gk[t])))
                    v[t] = field.add(int(v[t]), field.mul(cg, int(hk[t])))
            if v.any():
                break
        gs.append(v)
        hs.append(partner(len(gs) - 1))

    f = MatrixFq(field, np.column_stack(gs + hs))
    if not is_symplectic(f):
        raise AssertionError("completion failed the symplectic identity")
    return f


def gperp_extend(g: MatrixFq) -> MatrixFq:
    """Full-rank 2N x (2N - kappa) extension with g^T J gperp = 0.

    Columns are (g | G2 | H2) where (g G2 H1 H2) is the symplectic
    completion of g; g is the leftmost block of the result.
    """
    n = g.rows // 2
    kappa = g.cols
    f = symplectic_complete(g)
    idx = list(range(n)) + list(range(n + kappa, 2 * n))
    return f.take_cols(idx)


# ---------------------------------------------------------------------------
# local invertible transformations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LitTransform:
    """Four diagonal N x N blocks (Lambda_1 .. Lambda_4), stored as entry tuples.

    Valid iff every per-transmitter 2x2 block
    (l1[i], l2[i]; l3[i], l4[i]) is invertible, equivalently
    det(Lambda_1 Lambda_4 - Lambda_2 Lambda_3) != 0.
    """

    field: FieldParams
    l1: tuple[int, ...]
    l2: tuple[int, ...]
    l3: tuple[int, ...]
    l4: tuple[int, ...]

    def __post_init__(self):
        n = len(self.l1)
        if not (len(self.l2) == len(self.l3) == len(self.l4) == n):
            raise NotALitError("diagonal blocks must have equal length")

    @property
    def n(self) -> int:
        return len(self.l1)

    @staticmethod
    def identity(field: FieldParams, n: int) -> "LitTransform":
        one, zero = (1,) * n, (0,) * n
        return LitTransform(field, one, zero, zero, one)

    def is_valid(self) -> bool:
        f = self.field
        for a, b, c, d in zip(self.l1, self.l2, self.l3, self.l4):
            if f.sub(f.mul(a, d), f.mul(b, c)) == 0:
                return False
        return True

    def matrix(self) -> MatrixFq:
        n = self.n
        out = np.zeros((2 * n, 2 * n), dtype=np.int64)
        for i in range(n):
            out[i, i] = self.l1[i]
            out[i, n + i] = self.l2[i]
            out[n + i, i] = self.l3[i]
            out[n + i, n + i] = self.l4[i]
        return MatrixFq(self.field, out)

    def inverse(self) -> "LitTransform":
        f = self.field
        i1, i2, i3, i4 = [], [], [], []
        for a, b, c, d in zip(self.l1, self.l2, self.l3, self.l4):
            det = f.sub(f.mul(a, d), f.mul(b, c))
            if det == 0:
                raise NotALitError("per-transmitter block is singular")
            dinv = f.inv(det)
            i1.append(f.mul(d, dinv))
            i2.append(f.neg(f.mul(b, dinv)))
            i3.append(f.neg(f.mul(c, dinv)))
            i4.append(f.mul(a, dinv))
        return LitTransform(f, tuple(i1), tuple(i2), tuple(i3), tuple(i4))


def swap_lit(field: FieldParams, sigma: Sequence[int]) -> LitTransform:
    """The signed-swap LIT (I - S, S; -S, I - S) for a 0/1 diagonal S."""
    s = tuple(int(x) for x in sigma)
    if any(x not in (0, 1) for x in s):
        raise NotALitError("sigma entries must be 0 or 1")
    one_minus = tuple(1 - x for x in s)
    neg = tuple(field.neg(x) for x in s)
    return LitTransform(field, one_minus, s, neg, one_minus)


def apply_lit(mt: MatrixFq, lam: LitTransform, p: MatrixFq) -> MatrixFq:
    """P @ mt @ Lambda; preserves LIT-feasibility of the transfer matrix."""
    if not lam.is_valid():
        raise NotALitError("per-transmitter block is singular")
    n = mt.rows
    if mt.cols != 2 * n or lam.n != n or p.shape != (n, n):
        raise DimMismatchError(
            f"shapes N x 2N, LIT size N, P size N x N required; got {mt.shape}"
        )
    if mat_rank(p) != n:
        raise SingularMatrixError("receiver transform P must be invertible")
    return p @ mt @ lam.matrix()


# ---------------------------------------------------------------------------
# signed column swap and standard form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SwapResult:
    m_out: MatrixFq
    sigma: MatrixFq  # diagonal 0/1


def _check_transfer_sso(mt: MatrixFq) -> None:
    n = mt.rows
    if mt.cols != 2 * n:
        raise BadShapeError(f"transfer matrices are N x 2N, got {mt.shape}")
    if not is_sso(mt.T):
        raise NotSSOError("transpose of the transfer matrix is not SSO")


def signed_column_swap(mt: MatrixFq) -> SwapResult:
    """Make the left N x N half invertible by signed column swaps.

    Scans positions left to right keeping the left column whenever it is
    independent of the already-fixed ones, otherwise swapping in the
    negated right column.  The swapped matrix stays SSO-transposed; by the
    underlying dichotomy argument the scan can never get stuck, so the
    failure branch is unreachable for valid input.
    """
    _check_transfer_sso(mt)
    field = mt.field
    n = mt.rows
    enc = mt.encodings()
    left = [enc[:, i].copy() for i in range(n)]
    right = [enc[:, n + i].copy() for i in range(n)]
    sigma = [0] * n
    fixed: list[np.ndarray] = []

    def independent(v: np.ndarray) -> bool:
        if not v.any():
            return False
        if not fixed:
            return True
        stacked = MatrixFq(field, np.column_stack(fixed + [v]))
        return mat_rank(stacked) == len(fixed) + 1

    for i in range(n):
        if independent(left[i]):
            fixed.append(left[i])
        elif independent(right[i]):
            li = left[i]
            left[i] = np.asarray([field.neg(int(x)) for x in right[i]], dtype=np.int64)
            right[i] = li
            sigma[i] = 1
            fixed.append(left[i])
        else:
            raise AlgorithmFailureError(
                f"both candidate columns dependent at position {i}"
            )

    m_out = MatrixFq(field, np.column_stack(left + right))
    # cross-check against the block form mt @ (I-S, S; -S, I-S)
    if m_out != mt @ swap_lit(field, sigma).matrix():
        raise AssertionError("swap output disagrees with its block-matrix form")
    return SwapResult(m_out=m_out, sigma=MatrixFq.diagonal(field, sigma))


@dataclass(frozen=True)
class StandardForm:
    """Factors of mt = p @ (I | s) @ lam with s symmetric and p invertible."""

    s: MatrixFq
    p: MatrixFq
    lam: LitTransform


def to_standard_form(mt: MatrixFq) -> StandardForm:
    """Standard form of an SSO-transposed transfer matrix.

    Not unique; only the reconstruction identity and the symmetry of S are
    guaranteed.
    """
    swap = signed_column_swap(mt)
    field = mt.field
    n = mt.rows
    m_l = swap.m_out.submatrix(slice(None), slice(0, n))
    m_r = swap.m_out.submatrix(slice(None), slice(n, 2 * n))
    p = m_l
    s = mat_inverse(m_l) @ m_r
    if s != s.T:
        raise AssertionError("standard form produced a non-symmetric S")
    sigma = [int(swap.sigma.encodings()[i, i]) for i in range(n)]
    lam = swap_lit(field, sigma).inverse()
    ident = MatrixFq.identity(field, n)
    if p @ ident.hstack(s) @ lam.matrix() != mt:
        raise AssertionError("standard-form reconstruction failed")
    return StandardForm(s=s, p=p, lam=lam)


# ---------------------------------------------------------------------------
# LIT feasibility (diagonal rescaling of the right half)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Feasible:
    delta: MatrixFq  # diagonal, invertible


@dataclass(frozen=True)
class Infeasible:
    pass


FeasibilityResult = Feasible | Infeasible


def _delta_constraint_matrix(mt: MatrixFq) -> MatrixFq:
    """Rows are the linear constraints on diag(delta) from
    (M_l | M_r D) J (M_l | M_r D)^T = 0, i.e. M_r D M_l^T symmetric."""
    field = mt.field
    n = mt.rows
    enc = mt.encodings()
    ml, mr = enc[:, :n], enc[:, n:]
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            row = [
                field.sub(
                    field.mul(int(mr[i, k]), int(ml[j, k])),
                    field.mul(int(ml[i, k]), int(mr[j, k])),
                )
                for k in range(n)
            ]
            rows.append(row)
    if not rows:
        rows = [[0] * n]
    return MatrixFq(field, np.asarray(rows, dtype=np.int64))


def lit_feasibility(mt: MatrixFq) -> FeasibilityResult:
    """Existence of an invertible diagonal D with (M_l | M_r D) SSO-transposed.

    Total function: Feasible iff rank(mt) = N and the linear solution set
    of the self-orthogonality constraints contains an everywhere-nonzero
    diagonal.  The solution set is enumerated exhaustively when it has at
    most 10^6 points, else sampled with 10^4 deterministic draws (a
    documented completeness limitation; never reached at desk scale).
    """
    field = mt.field
    n = mt.rows
    if mt.cols != 2 * n:
        raise BadShapeError(f"transfer matrices are N x 2N, got {mt.shape}")
    if mat_rank(mt) != n:
        return Infeasible()
    j = build_J(field, n)
    if (mt @ j @ mt.T).is_zero():
        return Feasible(MatrixFq.identity(field, n))
    a = _delta_constraint_matrix(mt)
    null = nullspace_basis(a)
    d = null.cols
    if d == 0:
        return Infeasible()
    nb = null.encodings()
    q = field.q

    def combine(coeffs: Sequence[int]) -> list[int]:
        out = [0] * n
        for k, c in enumerate(coeffs):
            if c:
                for t in range(n):
                    out[t] = field.add(out[t], field.mul(int(c), int(nb[t, k])))
        return out

    if q**d <= FEASIBILITY_ENUM_LIMIT:
        candidates = itertools.product(range(q), repeat=d)
    else:
        rng = np.random.default_rng(0)
        candidates = (
            tuple(int(x) for x in rng.integers(0, q, size=d))
            for _ in range(FEASIBILITY_SAMPLES)
        )
    for coeffs in candidates:
        delta = combine(coeffs)
        if all(v != 0 for v in delta):
            return Feasible(MatrixFq.diagonal(field, delta))
    return Infeasible()
