"""Construction and classical evaluation of (kappa, N)-sum boxes.

A box is specified by a stabilizer generator matrix G (2N x kappa,
self-orthogonal, full column rank), its extension G^perp, and a
completion H making (G^perp | H) invertible; the transfer matrix is the
bottom kappa rows of (G^perp | H)^{-1}, so the box computes y = M x on
2N classical inputs split pairwise across N transmitters.  For kappa < N
the remaining N - kappa output digits carry no information and are
surfaced as seeded uniform randomness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BadCompletionError,
    DimMismatchError,
    IndexOutOfRangeError,
    NotRealizableError,
    NotSelfOrthogonalError,
    RankDeficientError,
)
from .gf import FieldElement, FieldParams
from .matfq import (
    Inconsistent,
    MatrixFq,
    mat_inverse,
    mat_rank,
    nullspace_basis,
    solve_linear,
)
from .symplectic import build_J, gperp_extend, is_isotropic


@dataclass(frozen=True)
class SumBoxSpec:
    """A validated (kappa, N)-sum box."""

    field: FieldParams
    n: int
    kappa: int
    g: MatrixFq  # 2N x kappa
    gperp: MatrixFq  # 2N x (2N - kappa); equals g when kappa == N
    h: MatrixFq  # 2N x kappa
    m: MatrixFq  # kappa x 2N


def _validated_spec(g: MatrixFq, gperp: MatrixFq, h: MatrixFq) -> SumBoxSpec:
    field = g.field
    n2 = g.rows
    if n2 % 2:
        raise DimMismatchError("generator matrix needs an even number of rows")
    n = n2 // 2
    kappa = g.cols
    if not is_isotropic(g):
        raise NotSelfOrthogonalError("G^T J G != 0")
    if mat_rank(g) != kappa:
        raise RankDeficientError("generator columns are dependent")
    if gperp.shape != (n2, n2 - kappa) or gperp.submatrix(slice(None), range(kappa)) != g:
        raise RankDeficientError("G must be the leftmost block of G^perp")
    j = build_J(field, n)
    if not (g.T @ j @ gperp).is_zero():
        raise NotSelfOrthogonalError("G^T J G^perp != 0")
    if h.shape != (n2, kappa):
        raise DimMismatchError(f"H must be {n2} x {kappa}, got {h.shape}")
    gh = gperp.hstack(h)
    if mat_rank(gh) != n2:
        raise BadCompletionError("(G^perp | H) is singular")
    inv = mat_inverse(gh)
    m = inv.submatrix(range(n2 - kappa, n2), slice(None))
    if mat_rank(m) != kappa or not (m @ g).is_zero():
        raise AssertionError("transfer matrix failed its rank/annihilation checks")
    return SumBoxSpec(field=field, n=n, kappa=kappa, g=g, gperp=gperp, h=h, m=m)


def _default_completion(gperp: MatrixFq, kappa: int) -> MatrixFq:
    """Greedy H: standard basis vectors, in index order, that grow the rank."""
    field = gperp.field
    n2 = gperp.rows
    cols = [gperp.encodings()[:, i] for i in range(gperp.cols)]
    picked: list[np.ndarray] = []
    for k in range(n2):
        if len(picked) == kappa:
            break
        cand = np.zeros(n2, dtype=np.int64)
        cand[k] = 1
        stacked = MatrixFq(field, np.column_stack(cols + picked + [cand]))
        if mat_rank(stacked) == len(cols) + len(picked) + 1:
            picked.append(cand)
    if len(picked) != kappa:
        raise AssertionError("standard basis failed to complete the span")
    return MatrixFq(field, np.column_stack(picked))


def build_box(g: MatrixFq, h: MatrixFq | None = None) -> SumBoxSpec:
    """Box from stabilizer generators G and an optional completion H.

    For kappa < N the extension G^perp is derived by symplectic
    completion; when H is omitted a deterministic completion is chosen
    greedily from the standard basis.
    """
    if g.rows % 2:
        raise DimMismatchError("generator matrix needs an even number of rows")
    n = g.rows // 2
    kappa = g.cols
    if not is_isotropic(g):
        raise NotSelfOrthogonalError("G^T J G != 0")
    if mat_rank(g) != kappa:
        raise RankDeficientError("generator columns are dependent")
    gperp = g if kappa == n else gperp_extend(g)
    if h is None:
        h = _default_completion(gperp, kappa)
    return _validated_spec(g, gperp, h)


def box_from_transfer(mt: MatrixFq) -> SumBoxSpec:
    """Realize a transfer matrix with mt J mt^T = 0 and full row rank exactly.

    The stabilizer generators are taken as J^T mt^T (always symplectically
    orthogonal to the whole nullspace of mt), extended to a nullspace
    basis for G^perp; H solves mt H = I so the resulting box reproduces
    mt exactly, not merely up to row operations.
    """
    field = mt.field
    kappa = mt.rows
    if mt.cols % 2:
        raise DimMismatchError("transfer matrices have an even number of columns")
    n = mt.cols // 2
    j = build_J(field, n)
    if not (mt @ j @ mt.T).is_zero():
        raise NotRealizableError(
            "mt J mt^T != 0; try lit_feasibility for a rescaled realization"
        )
    if mat_rank(mt) != kappa:
        raise NotRealizableError("transfer matrix must have full row rank")
    g = j.T @ mt.T
    null = nullspace_basis(mt)  # 2N x (2N - kappa)
    cols = [g.encodings()[:, i] for i in range(kappa)]
    for i in range(null.cols):
        if len(cols) == 2 * n - kappa:
            break
        cand = null.encodings()[:, i]
        stacked = MatrixFq(field, np.column_stack(cols + [cand]))
        if mat_rank(stacked) == len(cols) + 1:
            cols.append(cand)
    gperp = MatrixFq(field, np.column_stack(cols))
    sol = solve_linear(mt, MatrixFq.identity(field, kappa))
    if isinstance(sol, Inconsistent):
        raise AssertionError("mt H = I is always solvable at full row rank")
    h = sol.x if hasattr(sol, "x") else sol.particular
    spec = _validated_spec(g, gperp, h)
    if spec.m != mt:
        raise AssertionError("realized box does not reproduce the transfer matrix")
    return spec


@dataclass(frozen=True)
class BoxOutput:
    digits: tuple[int, ...]  # kappa informative outputs, m @ x
    discarded: tuple[int, ...]  # N - kappa uniformly random fill
    seed_used: int


def _enc_input(field: FieldParams, x: Sequence) -> list[int]:
    out = []
    for v in x:
        if isinstance(v, FieldElement):
            out.append(v.val)
        else:
            out.append(field.check_enc(int(v)))
    return out


def evaluate(spec: SumBoxSpec, x: Sequence, seed: int = 0) -> BoxOutput:
    """y = M x plus seed-reproducible uniform fill for the discarded digits."""
    xs = _enc_input(spec.field, x)
    if len(xs) != 2 * spec.n:
        raise DimMismatchError(f"input length {len(xs)} != {2 * spec.n}")
    xcol = MatrixFq.column(spec.field, xs)
    digits = tuple(int(v) for v in (spec.m @ xcol).encodings()[:, 0])
    rng = np.random.default_rng(seed)
    discarded = tuple(
        int(v) for v in rng.integers(0, spec.field.q, size=spec.n - spec.kappa)
    )
    return BoxOutput(digits=digits, discarded=discarded, seed_used=seed)


def transmitter_view(spec: SumBoxSpec, tx: int, pair: Sequence) -> dict[int, int]:
    """Partial input assignment for transmitter tx in [1..N].

    Transmitter tx controls inputs x_tx and x_{N+tx}; positions are
    returned 0-based.  Composing all N views yields a complete input.
    """
    if not 1 <= tx <= spec.n:
        raise IndexOutOfRangeError(f"transmitter index {tx} outside [1, {spec.n}]")
    vals = _enc_input(spec.field, pair)
    if len(vals) != 2:
        raise DimMismatchError("each transmitter supplies exactly two digits")
    return {tx - 1: vals[0], spec.n + tx - 1: vals[1]}


def assemble_input(spec: SumBoxSpec, views: Sequence[Mapping[int, int]]) -> list[int]:
    """Merge per-transmitter views into the full 2N input vector."""
    x: dict[int, int] = {}
    for view in views:
        for pos, val in view.items():
            if pos in x:
                raise IndexOutOfRangeError(f"input position {pos} set twice")
            x[pos] = val
    if sorted(x) != list(range(2 * spec.n)):
        raise DimMismatchError("views do not cover all 2N input positions")
    return [x[i] for i in range(2 * spec.n)]
