"""GRS codes, Cauchy-Vandermonde (CSA/QCSA) matrices, and the derived boxes.

A QCSA matrix is diag(beta) times the N x N Cauchy-Vandermonde matrix of a
cross-subspace-alignment scheme.  Pairing a u-scaled instance with its
dual-scaled (v) instance yields a strongly self-orthogonal generator block
and hence a feasible N-sum box whose outputs decode two scheme instances
"over the air"; the symmetric variant keeps only the desired symbols and
randomizes the interference outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimMismatchError,
    DuplicatePointsError,
    FieldTooSmallError,
    InvalidSpecError,
    LTooLargeError,
    ZeroMultiplierError,
)
from .gf import FieldElement, FieldParams
from .matfq import MatrixFq, mat_inverse, mat_rank, permutation_matrix
from .sumbox import SumBoxSpec, _validated_spec, build_box


def _encs(field: FieldParams, vals: Sequence) -> tuple[int, ...]:
    return tuple(
        v.val if isinstance(v, FieldElement) else field.check_enc(int(v)) for v in vals
    )


@dataclass(frozen=True)
class GrsSpec:
    """Generalized Reed-Solomon code data: n rows u_i (1, a_i, ..., a_i^(k-1))."""

    field: FieldParams
    n: int
    k: int
    alpha: tuple[int, ...]
    u: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise InvalidSpecError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if len(self.alpha) != self.n or len(self.u) != self.n:
            raise InvalidSpecError("alpha and u must have length n")
        if len(set(self.alpha)) != self.n:
            raise DuplicatePointsError("evaluation points must be distinct")
        if any(x == 0 for x in self.u):
            raise ZeroMultiplierError("column multipliers must be nonzero")


def make_grs(field: FieldParams, n: int, k: int, alpha: Sequence, u: Sequence) -> GrsSpec:
    return GrsSpec(field, n, k, _encs(field, alpha), _encs(field, u))


def grs_generator(spec: GrsSpec) -> MatrixFq:
    """n x k generator with entry (i, j) = u_i * alpha_i^j."""
    field = spec.field
    out = np.zeros((spec.n, spec.k), dtype=np.int64)
    for i in range(spec.n):
        acc = spec.u[i]
        for j in range(spec.k):
            out[i, j] = acc
            acc = field.mul(acc, spec.alpha[i])
    return MatrixFq(field, out)


def dual_scalars(field: FieldParams, alpha: Sequence, u: Sequence) -> tuple[int, ...]:
    """Multipliers v making GRS(alpha, v, n-k) the dual of GRS(alpha, u, k).

    v_j = u_j^{-1} * (prod_{i != j} (alpha_j - alpha_i))^{-1}.
    """
    a = _encs(field, alpha)
    uu = _encs(field, u)
    if len(set(a)) != len(a):
        raise DuplicatePointsError("evaluation points must be distinct")
    if any(x == 0 for x in uu):
        raise ZeroMultiplierError("multipliers must be nonzero")
    out = []
    for j in range(len(a)):
        prod = 1
        for i in range(len(a)):
            if i != j:
                prod = field.mul(prod, field.sub(a[j], a[i]))
        out.append(field.inv(field.mul(uu[j], prod)))
    return tuple(out)


@dataclass(frozen=True)
class QcsaParams:
    """Evaluation-point data for an N x N QCSA matrix.

    The N + L values alpha_1..alpha_N, f_1..f_L must be pairwise distinct
    (so q >= N + L) and every beta_i nonzero.  The box construction
    additionally needs L <= floor(N/2), enforced at box-build time.
    """

    field: FieldParams
    n: int
    l: int
    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    f: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.l <= self.n:
            raise InvalidSpecError(f"need 1 <= L <= N, got L={self.l}, N={self.n}")
        if len(self.alpha) != self.n or len(self.beta) != self.n or len(self.f) != self.l:
            raise InvalidSpecError("alpha, beta need length N; f needs length L")
        if self.field.q < self.n + self.l:
            raise FieldTooSmallError(
                f"q = {self.field.q} < N + L = {self.n + self.l}"
            )
        if len(set(self.alpha) | set(self.f)) != self.n + self.l:
            raise DuplicatePointsError("alpha and f values must be pairwise distinct")
        if any(b == 0 for b in self.beta):
            raise ZeroMultiplierError("beta values must be nonzero")


def make_qcsa_params(
    field: FieldParams, n: int, l: int, alpha: Sequence, beta: Sequence, f: Sequence
) -> QcsaParams:
    return QcsaParams(field, n, l, _encs(field, alpha), _encs(field, beta), _encs(field, f))


def qcsa_matrix(params: QcsaParams) -> MatrixFq:
    """Columns 1..L: beta_i / (f_j - alpha_i); then beta_i alpha_i^0..^(N-L-1)."""
    field = params.field
    n, l = params.n, params.l
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        b = params.beta[i]
        for j in range(l):
            out[i, j] = field.mul(b, field.inv(field.sub(params.f[j], params.alpha[i])))
        acc = b
        for j in range(n - l):
            out[i, l + j] = acc
            acc = field.mul(acc, params.alpha[i])
    m = MatrixFq(field, out)
    if mat_rank(m) != n:
        raise AssertionError("QCSA matrix must be invertible")
    return m


def csa_matrix(field: FieldParams, n: int, l: int, alpha: Sequence, f: Sequence) -> MatrixFq:
    """The beta = 1 special case."""
    return qcsa_matrix(make_qcsa_params(field, n, l, alpha, (1,) * n, f))


def _box_permutation(n: int, l: int) -> tuple[int, ...]:
    """0-based column permutation mapping diag(Q_u, Q_v) onto (G | H).

    Moves the u-side Vandermonde columns of degree < ceil(N/2) and the
    v-side ones of degree < floor(N/2) to the front.
    """
    up, down = (n + 1) // 2, n // 2
    pi_1based = (
        list(range(l + 1, l + up + 1))
        + list(range(n + l + 1, n + l + down + 1))
        + list(range(1, l + 1))
        + list(range(l + up + 1, n + 1))
        + list(range(n + 1, n + l + 1))
        + list(range(n + l + down + 1, 2 * n + 1))
    )
    return tuple(i - 1 for i in pi_1based)


@dataclass(frozen=True)
class QcsaBox:
    """An N-sum box realizing over-the-air decoding of two scheme instances."""

    params: QcsaParams  # beta slot holds u
    spec: SumBoxSpec
    pi: tuple[int, ...]  # 0-based; (G | H) = diag(Q_u, Q_v) P_pi
    m_qcsa: MatrixFq
    u: tuple[int, ...]
    v: tuple[int, ...]
    qu: MatrixFq
    qv: MatrixFq


def qcsa_box(params: QcsaParams) -> QcsaBox:
    """Build the box for u = params.beta and its dual v.

    The generator block is diag(GRS(alpha,u,ceil(N/2)), GRS(alpha,v,floor(N/2)))
    and H holds the remaining columns of diag(Q_u, Q_v); the resulting
    transfer matrix satisfies m @ diag(Q_u, Q_v) @ P_pi = (0 | I) exactly.
    """
    field = params.field
    n, l = params.n, params.l
    if l > n // 2:
        raise LTooLargeError(f"box construction needs L <= floor(N/2), got L={l}, N={n}")
    u = params.beta
    v = dual_scalars(field, params.alpha, u)
    qu = qcsa_matrix(params)
    qv = qcsa_matrix(make_qcsa_params(field, n, l, params.alpha, v, params.f))
    diag = MatrixFq.block_diag([qu, qv])
    pi = _box_permutation(n, l)
    gh = diag.take_cols(pi)
    g = gh.submatrix(slice(None), range(n))
    h = gh.submatrix(slice(None), range(n, 2 * n))
    spec = build_box(g, h)
    p_pi = permutation_matrix(field, pi)
    check = spec.m @ diag @ p_pi
    zero_i = MatrixFq.zeros(field, n, n).hstack(MatrixFq.identity(field, n))
    if check != zero_i:
        raise AssertionError("transfer matrix failed the permuted-selector identity")
    return QcsaBox(
        params=params, spec=spec, pi=pi, m_qcsa=spec.m, u=u, v=v, qu=qu, qv=qv
    )


@dataclass(frozen=True)
class OtaResult:
    """Split of the box outputs: desired symbols then residual interference."""

    delta1: tuple[int, ...]
    delta2: tuple[int, ...]
    nu_tails: tuple[int, ...]  # tail of instance 1 (floor(N/2)-L) then instance 2


def over_the_air_decode(
    box: QcsaBox, a1: Sequence, a2: Sequence, u: Sequence, v: Sequence
) -> OtaResult:
    """Scale each server's two answers by (u_j, v_j), feed the box, split y.

    y = (delta^1_1..L, nu^1 tail, delta^2_1..L, nu^2 tail) with tails of
    lengths floor(N/2) - L and ceil(N/2) - L.
    """
    field = box.params.field
    n, l = box.params.n, box.params.l
    ue, ve = _encs(field, u), _encs(field, v)
    a1e, a2e = _encs(field, a1), _encs(field, a2)
    if not len(a1e) == len(a2e) == len(ue) == len(ve) == n:
        raise DimMismatchError("need N answers and N scalars per instance")
    x = [field.mul(ue[i], a1e[i]) for i in range(n)] + [
        field.mul(ve[i], a2e[i]) for i in range(n)
    ]
    y = (box.spec.m @ MatrixFq.column(field, x)).encodings()[:, 0]
    down, up = n // 2, (n + 1) // 2
    d1 = tuple(int(t) for t in y[:l])
    tail1 = tuple(int(t) for t in y[l:down])
    d2 = tuple(int(t) for t in y[down : down + l])
    tail2 = tuple(int(t) for t in y[down + l :])
    assert len(tail2) == up - l
    return OtaResult(delta1=d1, delta2=d2, nu_tails=tail1 + tail2)


def reduce_servers(n: int, l: int) -> tuple[int, int]:
    """Drop redundant servers when L > N/2, preserving interference N - L."""
    if l > n:
        raise InvalidSpecError(f"need L <= N, got L={l} > N={n}")
    if 2 * l <= n:
        return n, l
    n_prime = 2 * (n - l)
    return n_prime, n_prime // 2


def symmetric_box(params: QcsaParams) -> SumBoxSpec:
    """(2L, N)-sum box outputting only the desired symbols of both instances.

    The generator block-diagonal pairs GRS(alpha,u,L) with GRS(alpha,v,L);
    the extension appends the complementary dual-code columns (Vandermonde
    degrees L..N-L-1 on each side) and H holds the two Cauchy blocks.  The
    N - 2L non-informative outputs are discarded as uniform randomness.
    """
    field = params.field
    n, l = params.n, params.l
    if l > n // 2:
        raise LTooLargeError(f"symmetric box needs L <= floor(N/2), got L={l}, N={n}")
    u = params.beta
    v = dual_scalars(field, params.alpha, u)
    gu_full = grs_generator(make_grs(field, n, n - l, params.alpha, u))
    gv_full = grs_generator(make_grs(field, n, n - l, params.alpha, v))
    c1 = gu_full.submatrix(slice(None), range(l))
    c2 = gv_full.submatrix(slice(None), range(l))
    g = MatrixFq.block_diag([c1, c2])
    g1p = gu_full.encodings()[:, l : n - l]
    g2p = gv_full.encodings()[:, l : n - l]
    zl = np.zeros((n, l), dtype=np.int64)
    zw = np.zeros((n, n - 2 * l), dtype=np.int64)
    gperp = MatrixFq(
        field,
        np.vstack(
            [
                np.hstack([c1.encodings(), zl, g1p, zw]),
                np.hstack([zl, c2.encodings(), zw, g2p]),
            ]
        ),
    )
    qu = qcsa_matrix(params)
    qv = qcsa_matrix(make_qcsa_params(field, n, l, params.alpha, v, params.f))
    hc_u = qu.submatrix(slice(None), range(l))
    hc_v = qv.submatrix(slice(None), range(l))
    h = MatrixFq.block_diag([hc_u, hc_v])
    spec = _validated_spec(g, gperp, h)
    if spec.kappa != 2 * l:
        raise AssertionError("symmetric box must output 2L digits")
    return spec
