"""Dense exact matrix algebra over GF(q).

Matrices are immutable row-major arrays of canonical integer encodings.
Elimination is deterministic (columns left to right, first nonzero row
top-down) so golden outputs are stable across runs and kernel backends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    DimMismatchError,
    FieldMismatchError,
    NotAPermutationError,
    SingularMatrixError,
)
from .gf import FieldElement, FieldParams


class MatrixFq:
    """An immutable rows x cols matrix over GF(q)."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldParams, data: np.ndarray | Sequence[Sequence]):
        arr = np.asarray(
            [
                [e.val if isinstance(e, FieldElement) else int(e) for e in row]
                for row in data
            ]
            if not isinstance(data, np.ndarray)
            else data,
            dtype=np.int64,
        )
        if arr.ndim != 2:
            raise DimMismatchError(f"matrix data must be 2-D, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("entry encoding outside [0, q)")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.field = field
        self._a = arr

    # -- construction --------------------------------------------------------

    @staticmethod
    def zeros(field: FieldParams, rows: int, cols: int) -> "MatrixFq":
        return MatrixFq(field, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field: FieldParams, n: int) -> "MatrixFq":
        return MatrixFq(field, np.eye(n, dtype=np.int64))

    @staticmethod
    def diagonal(field: FieldParams, entries: Sequence[int]) -> "MatrixFq":
        vals = [e.val if isinstance(e, FieldElement) else int(e) for e in entries]
        return MatrixFq(field, np.diag(np.asarray(vals, dtype=np.int64)))

    @staticmethod
    def column(field: FieldParams, entries: Sequence[int]) -> "MatrixFq":
        vals = [e.val if isinstance(e, FieldElement) else int(e) for e in entries]
        return MatrixFq(field, np.asarray(vals, dtype=np.int64).reshape(-1, 1))

    # -- basic queries --------------------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def encodings(self) -> np.ndarray:
        """Read-only int64 view of the underlying encodings."""
        return self._a

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def get(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, int(self._a[i, j]))

    def row(self, i: int) -> list[int]:
        return self._a[i].tolist()

    def col(self, j: int) -> list[int]:
        return self._a[:, j].tolist()

    def is_zero(self) -> bool:
        return not self._a.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixFq)
            and self.field == other.field
            and self._a.shape == other._a.shape
            and bool((self._a == other._a).all())
        )

    def __hash__(self):
        return hash((self.field, self._a.tobytes(), self._a.shape))

    def __repr__(self) -> str:
        return f"MatrixFq({self.field}, {self._a.tolist()})"

    # -- slicing / assembly ----------------------------------------------------

    def submatrix(self, rows: slice | Sequence[int], cols: slice | Sequence[int]) -> "MatrixFq":
        idx_r = np.arange(self.rows)[rows] if isinstance(rows, slice) else np.asarray(rows)
        idx_c = np.arange(self.cols)[cols] if isinstance(cols, slice) else np.asarray(cols)
        return MatrixFq(self.field, self._a[np.ix_(idx_r, idx_c)])

    def take_cols(self, cols: Sequence[int]) -> "MatrixFq":
        return MatrixFq(self.field, self._a[:, np.asarray(cols, dtype=np.int64)])

    def hstack(self, other: "MatrixFq") -> "MatrixFq":
        self._check_field(other)
        if self.rows != other.rows:
            raise DimMismatchError("hstack needs equal row counts")
        return MatrixFq(self.field, np.hstack([self._a, other._a]))

    def vstack(self, other: "MatrixFq") -> "MatrixFq":
        self._check_field(other)
        if self.cols != other.cols:
            raise DimMismatchError("vstack needs equal column counts")
        return MatrixFq(self.field, np.vstack([self._a, other._a]))

    @staticmethod
    def block_diag(blocks: Sequence["MatrixFq"]) -> "MatrixFq":
        field = blocks[0].field
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = np.zeros((rows, cols), dtype=np.int64)
        r = c = 0
        for b in blocks:
            if b.field != field:
                raise FieldMismatchError("block fields differ")
            out[r : r + b.rows, c : c + b.cols] = b._a
            r += b.rows
            c += b.cols
        return MatrixFq(field, out)

    @property
    def T(self) -> "MatrixFq":
        return MatrixFq(self.field, self._a.T)

    # -- arithmetic -------------------------------------------------------------

    def _check_field(self, other: "MatrixFq") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other: "MatrixFq") -> "MatrixFq":
        self._check_field(other)
        if self.shape != other.shape:
            raise DimMismatchError(f"{self.shape} vs {other.shape}")
        from .kernels.pure import _vec_add

        return MatrixFq(self.field, _vec_add(self.field, self._a, other._a))

    def __sub__(self, other: "MatrixFq") -> "MatrixFq":
        return self + (-other)

    def __neg__(self) -> "MatrixFq":
        from .kernels.pure import _vec_neg

        return MatrixFq(self.field, _vec_neg(self.field, self._a))

    def scale(self, c: int | FieldElement) -> "MatrixFq":
        from .kernels.pure import _vec_mul

        cv = c.val if isinstance(c, FieldElement) else self.field.check_enc(int(c))
        return MatrixFq(self.field, _vec_mul(self.field, self._a, np.int64(cv)))

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        return mat_mul(self, other)


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    """Exact product over GF(q)."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.cols != b.rows:
        raise DimMismatchError(f"{a.shape} @ {b.shape}")
    return MatrixFq(a.field, kernels.matmul(a.field, a.encodings(), b.encodings()))


@dataclass(frozen=True)
class RrefResult:
    rref: MatrixFq
    rank: int
    pivots: tuple[int, ...]
    transform: MatrixFq


def rref_decompose(a: MatrixFq) -> RrefResult:
    """Reduced row echelon form with the invertible row transform.

    transform @ a == rref exactly; pivoting is deterministic (first nonzero
    in column order, rows scanned top-down).
    """
    r, t, pivots = kernels.rref(a.field, a.encodings())
    return RrefResult(
        rref=MatrixFq(a.field, r),
        rank=len(pivots),
        pivots=tuple(pivots),
        transform=MatrixFq(a.field, t),
    )


def mat_rank(a: MatrixFq) -> int:
    return rref_decompose(a).rank


def mat_inverse(a: MatrixFq) -> MatrixFq:
    if a.rows != a.cols:
        raise DimMismatchError("only square matrices can be inverted")
    res = rref_decompose(a)
    if res.rank != a.rows:
        raise SingularMatrixError(f"rank {res.rank} < {a.rows}")
    return res.transform


@dataclass(frozen=True)
class UniqueSolution:
    x: MatrixFq


@dataclass(frozen=True)
class ParametricSolution:
    particular: MatrixFq
    nullspace: MatrixFq  # columns form a basis of null(a)


@dataclass(frozen=True)
class Inconsistent:
    pass


LinearSolution = UniqueSolution | ParametricSolution | Inconsistent


def nullspace_basis(a: MatrixFq) -> MatrixFq:
    """Columns form a basis of {x : a x = 0} (cols x (cols-rank))."""
    res = rref_decompose(a)
    field = a.field
    free = [j for j in range(a.cols) if j not in res.pivots]
    basis = np.zeros((a.cols, len(free)), dtype=np.int64)
    r = res.rref.encodings()
    for k, j in enumerate(free):
        basis[j, k] = 1
        for row_idx, pcol in enumerate(res.pivots):
            basis[pcol, k] = field.neg(int(r[row_idx, j]))
    return MatrixFq(field, basis)


def solve_linear(a: MatrixFq, b: MatrixFq) -> LinearSolution:
    """All solutions of a x = b (b may have several columns).

    Unique when a has full column rank, Parametric with a nullspace basis
    otherwise, Inconsistent when no solution exists.  The particular
    solution sets every free variable to zero.
    """
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.rows != b.rows:
        raise DimMismatchError(f"a has {a.rows} rows, b has {b.rows}")
    res = rref_decompose(a)
    c = (res.transform @ b).encodings()
    if c[res.rank :].any():
        return Inconsistent()
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for row_idx, pcol in enumerate(res.pivots):
        x[pcol] = c[row_idx]
    xm = MatrixFq(a.field, x)
    if res.rank == a.cols:
        return UniqueSolution(xm)
    return ParametricSolution(xm, nullspace_basis(a))


def permutation_matrix(field: FieldParams, pi: Sequence[int]) -> MatrixFq:
    """Column j is the standard basis vector e_{pi[j]} (0-based)."""
    n = len(pi)
    if sorted(int(i) for i in pi) != list(range(n)):
        raise NotAPermutationError(f"{list(pi)} is not a permutation of 0..{n - 1}")
    out = np.zeros((n, n), dtype=np.int64)
    for j, i in enumerate(pi):
        out[int(i), j] = 1
    return MatrixFq(field, out)
