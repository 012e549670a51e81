"""Brute-force state-vector oracle for sum boxes.

Simulates the stabilizer protocol behind a box spec at the unitary level:
prepare a joint eigenvector of the commuting Weyl operators labeled by the
generator columns, apply the input Weyl operator, and measure in the coset
basis.  Agreement with the classical transfer matrix is certified affinely
(outcome minus outcome-at-zero), which makes every claim insensitive to
the eigenvalue branch chosen during state preparation.

Basis convention: computational index i encodes the digit string
(j_1, ..., j_n) mixed-radix with qudit 1 most significant.  A Weyl label
s = (a | b) acts per qudit as X(a_k) Z(b_k): amplitude at j picks up
omega^tr(b.j) and moves to j + a, with omega = exp(2 pi i / p).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadIndexSetError,
    DimMismatchError,
    NotDeterministicError,
    NotSelfOrthogonalError,
    NumericalDegeneracyError,
    RankDeficientError,
    TooLargeError,
)
from .gf import FieldElement, FieldParams, symplectic_form
from .matfq import MatrixFq, mat_rank
from .sumbox import SumBoxSpec
from .symplectic import is_isotropic, symplectic_complete

MAX_WEYL_DIM = 2**20
MAX_STAB_DIM = 2**12
MAX_MIXED_DIM = 2**10

_NORM_TOL = 1e-9
_GRAM_TOL = 1e-7
_OVERLAP_TOL = 1e-6


@dataclass(frozen=True)
class StateVector:
    """Unit vector of q^n complex amplitudes over n qudits."""

    field: FieldParams
    n: int
    amps: np.ndarray

    def __post_init__(self):
        dim = self.field.q**self.n
        if self.amps.shape != (dim,):
            raise DimMismatchError(f"need {dim} amplitudes, got {self.amps.shape}")
        if abs(np.linalg.norm(self.amps) - 1.0) > _NORM_TOL:
            raise ValueError("state vector is not normalized")

    def density(self) -> "DensityOp":
        return DensityOp(self.field, self.n, np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True)
class DensityOp:
    """q^n x q^n density operator (hermitian, unit trace, PSD)."""

    field: FieldParams
    n: int
    mat: np.ndarray

    def __post_init__(self):
        dim = self.field.q**self.n
        if self.mat.shape != (dim, dim):
            raise DimMismatchError(f"need a {dim} x {dim} matrix")
        if np.abs(self.mat - self.mat.conj().T).max() > _NORM_TOL:
            raise ValueError("density operator is not hermitian")
        if abs(np.trace(self.mat).real - 1.0) > _NORM_TOL:
            raise ValueError("density operator trace != 1")
        if np.linalg.eigvalsh(self.mat).min() < -1e-7:
            raise ValueError("density operator is not positive semidefinite")


def _label(field: FieldParams, n: int, s: Sequence) -> list[int]:
    out = [v.val if isinstance(v, FieldElement) else field.check_enc(int(v)) for v in s]
    if len(out) != 2 * n:
        raise DimMismatchError(f"Weyl labels have length {2 * n}, got {len(out)}")
    return out


_DIGIT_CACHE: dict[tuple[FieldParams, int], np.ndarray] = {}


def _digit_table(field: FieldParams, n: int) -> np.ndarray:
    """(q^n, n) array: row i holds the digits of index i, qudit 1 first."""
    key = (field, n)
    tab = _DIGIT_CACHE.get(key)
    if tab is None:
        q = field.q
        idx = np.arange(q**n)
        tab = np.zeros((q**n, n), dtype=np.int64)
        for k in range(n):  # qudit 1 most significant
            tab[:, k] = (idx // q ** (n - 1 - k)) % q
        _DIGIT_CACHE[key] = tab
    return tab


def _index_of(field: FieldParams, digits: Sequence[int]) -> int:
    q = field.q
    acc = 0
    for d in digits:
        acc = acc * q + int(d)
    return acc


def _digits_of(field: FieldParams, n: int, index: int) -> tuple[int, ...]:
    q = field.q
    out = []
    for k in range(n):
        out.append((index // q ** (n - 1 - k)) % q)
    return tuple(out)


class _WeylOp:
    """Permutation/phase form of a Weyl operator on n qudits."""

    __slots__ = ("field", "n", "perm", "phase_exp", "omega")

    def __init__(self, field: FieldParams, n: int, label: Sequence[int]):
        q, p = field.q, field.p
        dim = q**n
        digits = _digit_table(field, n)
        a, b = label[:n], label[n:]
        shift_maps = np.zeros((n, q), dtype=np.int64)
        trace_maps = np.zeros((n, q), dtype=np.int64)
        for k in range(n):
            for d in range(q):
                shift_maps[k, d] = field.add(d, a[k])
                trace_maps[k, d] = field.trace(field.mul(b[k], d))
        weights = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self.perm = np.zeros(dim, dtype=np.int64)
        self.phase_exp = np.zeros(dim, dtype=np.int64)
        for k in range(n):
            self.perm += shift_maps[k, digits[:, k]] * weights[k]
            self.phase_exp += trace_maps[k, digits[:, k]]
        self.phase_exp %= p
        self.field = field
        self.n = n
        self.omega = np.exp(2j * np.pi / p)

    def apply(self, v: np.ndarray) -> np.ndarray:
        out = np.empty_like(v, dtype=np.complex128)
        out[self.perm] = (self.omega**self.phase_exp) * v
        return out

    def matrix(self) -> np.ndarray:
        dim = len(self.perm)
        w = np.zeros((dim, dim), dtype=np.complex128)
        w[self.perm, np.arange(dim)] = self.omega**self.phase_exp
        return w

    def power_scalar_exponent(self) -> int:
        """c with W^p = omega^c I (W^p is always a scalar)."""
        p = self.field.p
        acc = np.zeros(len(self.perm), dtype=np.int64)
        pos = np.arange(len(self.perm))
        for _ in range(p):
            acc += self.phase_exp[pos]
            pos = self.perm[pos]
        if not (pos == np.arange(len(self.perm))).all():
            raise AssertionError("Weyl permutation does not have order p")
        acc %= p
        if not (acc == acc[0]).all():
            raise AssertionError("W^p is not a scalar")
        return int(acc[0])


def weyl_apply(psi: StateVector, s: Sequence) -> StateVector:
    """Apply the Weyl operator labeled s to a state."""
    field, n = psi.field, psi.n
    if field.q**n > MAX_WEYL_DIM:
        raise TooLargeError(f"dimension {field.q**n} exceeds {MAX_WEYL_DIM}")
    label = _label(field, n, s)
    op = _WeylOp(field, n, label)
    return StateVector(field, n, op.apply(psi.amps))


def weyl_matrix(field: FieldParams, n: int, s: Sequence) -> np.ndarray:
    """Dense matrix of the Weyl operator; dual implementation for tests."""
    if field.q**n > MAX_WEYL_DIM:
        raise TooLargeError("dimension too large to materialize")
    return _WeylOp(field, n, _label(field, n, s)).matrix()


def weyl_commute(field: FieldParams, s: Sequence, t: Sequence) -> bool:
    """Commutation of Weyl operators == vanishing trace-symplectic form."""
    return symplectic_form(field, s, t) == 0


class _BranchSelector:
    """Deterministic joint-eigenspace selection across commuting unitaries.

    Branches are chosen by projecting a candidate vector (the uniform
    superposition, or the first standard basis vector surviving the
    accumulated projections when that is numerically null) and keeping the
    eigenvalue branch with the largest residual, lowest phase index first.
    """

    def __init__(self, field: FieldParams, n: int):
        self.field = field
        self.n = n
        self.dim = field.q**n
        self.chosen: list[tuple[_WeylOp, complex, int]] = []  # (op, unit, branch)
        self.cand = np.full(self.dim, 1.0 / np.sqrt(self.dim), dtype=np.complex128)

    def _project(self, op: _WeylOp, unit: complex, branch: int, v: np.ndarray) -> np.ndarray:
        p = self.field.p
        omega = op.omega
        acc = v.astype(np.complex128).copy()
        cur = v
        for k in range(1, p):
            cur = op.apply(cur)
            acc += (unit**k) * (omega ** (-branch * k)) * cur
        return acc / p

    def _refresh_candidate(self) -> None:
        for k in range(self.dim):
            v = np.zeros(self.dim, dtype=np.complex128)
            v[k] = 1.0
            for op, unit, branch in self.chosen:
                v = self._project(op, unit, branch, v)
            if np.linalg.norm(v) > _NORM_TOL:
                self.cand = v / np.linalg.norm(v)
                return
        raise NumericalDegeneracyError("no joint eigenvector found")

    def constrain(self, label: Sequence[int]) -> None:
        op = _WeylOp(self.field, self.n, label)
        p = self.field.p
        c = op.power_scalar_exponent()
        # unit normalizes W so that (unit * W)^p = I
        unit = np.exp(-2j * np.pi * c / (p * p))
        if np.linalg.norm(self.cand) < _NORM_TOL:
            self._refresh_candidate()
        norms = []
        for branch in range(p):
            norms.append(np.linalg.norm(self._project(op, unit, branch, self.cand)))
        best = int(np.argmax(np.asarray(norms) > max(norms) - 1e-12))
        self.cand = self._project(op, unit, best, self.cand)
        self.chosen.append((op, unit, best))

    def vector(self) -> np.ndarray:
        nrm = np.linalg.norm(self.cand)
        if nrm < _NORM_TOL:
            self._refresh_candidate()
            nrm = np.linalg.norm(self.cand)
        return self.cand / nrm

    def projector(self) -> np.ndarray:
        out = np.eye(self.dim, dtype=np.complex128)
        for op, unit, branch in self.chosen:
            cols = [self._project(op, unit, branch, out[:, j]) for j in range(self.dim)]
            out = np.column_stack(cols)
        return out


def _generator_labels(g: MatrixFq) -> list[list[int]]:
    """One constraint label per generator column and per prime-basis multiple."""
    field = g.field
    labels = []
    for i in range(g.cols):
        col = g.col(i)
        for j in range(field.r):
            mult = field.p**j  # encoding of the basis monomial x^j
            labels.append([field.mul(mult, v) for v in col])
    return labels


def _check_stabilizer_input(g: MatrixFq, max_dim: int) -> int:
    field = g.field
    if g.rows % 2:
        raise DimMismatchError("generator matrix needs an even number of rows")
    n = g.rows // 2
    if field.q**n > max_dim:
        raise TooLargeError(f"q^n = {field.q**n} exceeds {max_dim}")
    if not is_isotropic(g):
        raise NotSelfOrthogonalError("G^T J G != 0")
    if mat_rank(g) != g.cols:
        raise RankDeficientError("generator columns are dependent")
    return n


def stabilized_state(g: MatrixFq) -> StateVector:
    """A joint eigenvector of the commuting Weyl operators labeled by g.

    Every generator column contributes r prime-basis constraints; the
    eigenvalue branch is an arbitrary deterministic choice, so downstream
    protocol claims are stated affinely (outcome minus outcome at zero).
    """
    n = _check_stabilizer_input(g, MAX_STAB_DIM)
    sel = _BranchSelector(g.field, n)
    for label in _generator_labels(g):
        sel.constrain(label)
    return StateVector(g.field, n, sel.vector())


def _coset_basis(spec: SumBoxSpec, psi0: np.ndarray, h: MatrixFq) -> np.ndarray:
    """Columns: W(H s) psi0 for all s in F_q^kappa_of_h, indexed mixed-radix."""
    field, n = spec.field, spec.n
    dim = field.q**n
    k = h.cols
    basis = np.zeros((dim, field.q**k), dtype=np.complex128)
    for idx in range(field.q**k):
        s = _digits_of(field, k, idx)
        label = (h @ MatrixFq.column(field, s)).encodings()[:, 0]
        basis[:, idx] = _WeylOp(field, n, [int(v) for v in label]).apply(psi0)
    gram = basis.conj().T @ basis
    if np.abs(gram - np.eye(basis.shape[1])).max() > _GRAM_TOL:
        raise NumericalDegeneracyError("coset basis is not orthonormal")
    return basis


def _measure(field: FieldParams, n: int, basis: np.ndarray, psi: np.ndarray) -> tuple[tuple[int, ...], float]:
    overlaps = np.abs(basis.conj().T @ psi)
    best = int(np.argmax(overlaps))
    defect = abs(1.0 - overlaps[best] ** 2)
    if defect > _OVERLAP_TOL:
        raise NotDeterministicError(
            f"no coset element reaches unit overlap (defect {defect:.3g})"
        )
    return _digits_of(field, n, best), defect


def simulate_box(spec: SumBoxSpec, x: Sequence) -> tuple[int, ...]:
    """Measured digits for input x on a maximal (kappa = N) box."""
    digits, _ = _simulate_with_basis(spec, x, _box_basis(spec))
    return digits


def _box_basis(spec: SumBoxSpec) -> tuple[np.ndarray, np.ndarray]:
    if spec.kappa != spec.n:
        raise DimMismatchError("state-vector simulation needs a maximal box")
    if spec.field.q**spec.n > MAX_STAB_DIM:
        raise TooLargeError(f"q^n = {spec.field.q**spec.n} exceeds {MAX_STAB_DIM}")
    psi0 = stabilized_state(spec.g).amps
    return psi0, _coset_basis(spec, psi0, spec.h)


def _simulate_with_basis(
    spec: SumBoxSpec, x: Sequence, prepared: tuple[np.ndarray, np.ndarray]
) -> tuple[tuple[int, ...], float]:
    psi0, basis = prepared
    field, n = spec.field, spec.n
    label = _label(field, n, x)
    psi = _WeylOp(field, n, label).apply(psi0)
    return _measure(field, n, basis, psi)


@dataclass(frozen=True)
class CertifyReport:
    passed: bool
    tested: int
    max_prob_defect: float
    offset: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "tested": self.tested,
            "max_prob_defect": self.max_prob_defect,
            "offset": list(self.offset),
        }


def certify(
    spec: SumBoxSpec,
    mode: str = "exhaustive",
    trials: int = 64,
    seed: int = 0,
) -> CertifyReport:
    """Check simulate_box(x) - simulate_box(0) == m x over tested inputs.

    mode='exhaustive' enumerates all q^(2n) inputs (allowed only up to
    4096); mode='random' draws `trials` seeded inputs.
    """
    field, n = spec.field, spec.n
    q = field.q
    if mode == "exhaustive":
        if q ** (2 * n) > 4096:
            raise TooLargeError("exhaustive certification allowed only for q^(2n) <= 4096")
        inputs = (_digits_of(field, 2 * n, i) for i in range(q ** (2 * n)))
        count = q ** (2 * n)
    elif mode == "random":
        rng = np.random.default_rng(seed)
        inputs = (
            tuple(int(v) for v in rng.integers(0, q, size=2 * n)) for _ in range(trials)
        )
        count = trials
    else:
        raise ValueError("mode must be 'exhaustive' or 'random'")

    prepared = _box_basis(spec)
    offset, defect0 = _simulate_with_basis(spec, (0,) * (2 * n), prepared)
    max_defect = defect0
    passed = True
    for x in inputs:
        try:
            outcome, defect = _simulate_with_basis(spec, x, prepared)
        except NotDeterministicError:
            return CertifyReport(False, count, 1.0, offset)
        max_defect = max(max_defect, defect)
        expected = (spec.m @ MatrixFq.column(field, x)).encodings()[:, 0]
        calibrated = [field.sub(o, c) for o, c in zip(outcome, offset)]
        if calibrated != [int(v) for v in expected]:
            passed = False
    return CertifyReport(passed, count, float(max_defect), offset)


@dataclass(frozen=True)
class NonmaxResult:
    """Exact outcome distribution and seeded empirical counts over F_q^n."""

    field: FieldParams
    n: int
    probs: np.ndarray  # length q^n, indexed mixed-radix
    counts: np.ndarray  # same indexing
    shots: int

    def outcome_digits(self, index: int) -> tuple[int, ...]:
        return _digits_of(self.field, self.n, index)


def simulate_nonmax(
    spec: SumBoxSpec, x: Sequence, shots: int = 1024, seed: int = 0
) -> NonmaxResult:
    """Density-operator simulation of a non-maximal (kappa < N) box.

    The initial state is the uniform mixture over one joint eigenspace of
    the kappa-generator stabilizer; measurement happens in the coset basis
    of its deterministic maximal completion.  Calibrated first-kappa
    digits equal m x; the rest are uniform.
    """
    field, n = spec.field, spec.n
    if spec.kappa >= n:
        raise DimMismatchError("simulate_nonmax needs kappa < N")
    if field.q**n > MAX_MIXED_DIM:
        raise TooLargeError(f"q^n = {field.q**n} exceeds {MAX_MIXED_DIM}")
    label = _label(field, n, x)

    f = symplectic_complete(spec.g)
    g_max = f.take_cols(range(n))
    h2 = f.take_cols(range(n + spec.kappa, 2 * n))
    h_max = spec.h.hstack(h2)

    psi0 = stabilized_state(g_max).amps
    basis = _coset_basis(spec, psi0, h_max)

    sel = _BranchSelector(field, n)
    for lab in _generator_labels(spec.g):
        sel.constrain(lab)
    proj = sel.projector()
    dim_expected = field.q ** (n - spec.kappa)
    if abs(np.trace(proj).real - dim_expected) > _GRAM_TOL * dim_expected:
        raise NumericalDegeneracyError("joint eigenspace has unexpected dimension")
    rho0 = proj / np.trace(proj).real

    w = _WeylOp(field, n, label).matrix()
    rho_x = w @ rho0 @ w.conj().T
    probs = np.real(np.einsum("ij,jk,ik->i", basis.conj().T, rho_x, basis.T))
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > _GRAM_TOL:
        raise NumericalDegeneracyError("outcome probabilities do not sum to 1")
    probs = probs / total

    rng = np.random.default_rng(seed)
    draws = rng.choice(len(probs), size=shots, p=probs)
    counts = np.bincount(draws, minlength=len(probs))
    return NonmaxResult(field=field, n=n, probs=probs, counts=counts, shots=shots)


def partial_trace(rho: DensityOp, keep: Sequence[int]) -> DensityOp:
    """Trace out every qudit not in `keep` (1-based indices)."""
    n, q = rho.n, rho.field.q
    keep_set = sorted(set(int(k) for k in keep))
    if any(k < 1 or k > n for k in keep_set):
        raise BadIndexSetError(f"keep set {keep_set} not within [1, {n}]")
    tensor = rho.mat.reshape((q,) * (2 * n))
    out_n = len(keep_set)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row_idx, col_idx = [], []
    out_row, out_col = [], []
    next_free = 0
    for k in range(1, n + 1):
        if k in keep_set:
            r, c = letters[next_free], letters[next_free + 1]
            next_free += 2
            out_row.append(r)
            out_col.append(c)
        else:
            r = c = letters[next_free]
            next_free += 1
        row_idx.append(r)
        col_idx.append(c)
    expr = "".join(row_idx) + "".join(col_idx) + "->" + "".join(out_row) + "".join(out_col)
    reduced = np.einsum(expr, tensor).reshape(q**out_n, q**out_n)
    return DensityOp(rho.field, out_n, reduced)
