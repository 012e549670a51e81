"""State-vector oracle tests: Weyl algebra, stabilized states, certification."""

import itertools

import numpy as np
import pytest

from nsumbox import MatrixFq, make_field
from nsumbox.errors import (
    BadIndexSetError,
    DimMismatchError,
    TooLargeError,
)
from nsumbox.qoracle import (
    CertifyReport,
    DensityOp,
    StateVector,
    certify,
    partial_trace,
    simulate_box,
    simulate_nonmax,
    stabilized_state,
    weyl_apply,
    weyl_commute,
    weyl_matrix,
)
from nsumbox.sumbox import SumBoxSpec, build_box
from conftest import GF2, GF3, GF4, GF5, random_sso_generator

F_EX1 = MatrixFq(GF2, [[0, 1, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [1, 0, 0, 1]])
G_EX1 = F_EX1.submatrix(slice(None), [0, 1])
H_EX1 = F_EX1.submatrix(slice(None), [2, 3])


def basis_state(field, n, digits):
    dim = field.q**n
    idx = 0
    for d in digits:
        idx = idx * field.q + d
    v = np.zeros(dim, dtype=complex)
    v[idx] = 1.0
    return StateVector(field, n, v)


def uniform_state(field, n):
    dim = field.q**n
    return StateVector(field, n, np.full(dim, 1 / np.sqrt(dim), dtype=complex))


def test_weyl_apply_examples():
    psi = basis_state(GF2, 1, [0])
    assert np.allclose(weyl_apply(psi, [1, 0]).amps, [0, 1])
    plus = uniform_state(GF2, 1)
    out = weyl_apply(plus, [0, 1])
    assert np.allclose(out.amps, [1 / np.sqrt(2), -1 / np.sqrt(2)])
    # identity label leaves any state alone
    rngv = np.random.default_rng(0).normal(size=4) + 1j
    rngv = rngv / np.linalg.norm(rngv)
    st = StateVector(GF2, 2, rngv)
    assert np.allclose(weyl_apply(st, [0, 0, 0, 0]).amps, st.amps)


def test_weyl_unitarity(rng):
    for field, n in [(GF2, 2), (GF3, 1), (GF4, 1), (GF5, 1), (GF3, 2)]:
        dim = field.q**n
        for _ in range(20):
            v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            v /= np.linalg.norm(v)
            s = [int(x) for x in rng.integers(0, field.q, size=2 * n)]
            out = weyl_apply(StateVector(field, n, v), s)
            assert abs(np.linalg.norm(out.amps) - 1) < 1e-9


def test_weyl_commute_examples():
    assert weyl_commute(GF2, [1, 0], [1, 0])
    assert weyl_commute(GF2, [1, 1, 0, 0], [0, 0, 1, 1])
    assert not weyl_commute(GF2, [1, 0], [0, 1])


@pytest.mark.parametrize("field,n", [(GF2, 1), (GF2, 2), (GF3, 1), (GF4, 1), (GF5, 1), (GF3, 2)])
def test_weyl_commute_agrees_with_operators(field, n, rng):
    """Scalar form vs operator-level commutator (dual implementation)."""
    assert field.q**n <= 256
    for _ in range(25):
        s = [int(x) for x in rng.integers(0, field.q, size=2 * n)]
        t = [int(x) for x in rng.integers(0, field.q, size=2 * n)]
        ws, wt = weyl_matrix(field, n, s), weyl_matrix(field, n, t)
        comm = np.abs(ws @ wt - wt @ ws).max()
        assert weyl_commute(field, s, t) == (comm < 1e-9)


@pytest.mark.parametrize("field,n", [(GF2, 2), (GF3, 1), (GF4, 1), (GF5, 1)])
def test_weyl_composition_up_to_phase(field, n, rng):
    for _ in range(15):
        s = [int(x) for x in rng.integers(0, field.q, size=2 * n)]
        t = [int(x) for x in rng.integers(0, field.q, size=2 * n)]
        st = [field.add(a, b) for a, b in zip(s, t)]
        prod = weyl_matrix(field, n, s) @ weyl_matrix(field, n, t)
        target = weyl_matrix(field, n, st)
        # prod = gamma * target with |gamma| = 1
        nz = np.abs(target) > 1e-12
        ratios = prod[nz] / target[nz]
        assert np.allclose(ratios, ratios.flat[0], atol=1e-9)
        assert abs(abs(ratios.flat[0]) - 1) < 1e-9
        assert np.abs(prod[~nz]).max() < 1e-12


def test_stabilized_state_x_type():
    for field, n in [(GF2, 2), (GF3, 1), (GF5, 1)]:
        g = MatrixFq.identity(field, n).vstack(MatrixFq.zeros(field, n, n))
        psi = stabilized_state(g)
        assert np.allclose(np.abs(psi.amps), 1 / np.sqrt(field.q**n), atol=1e-9)


def test_stabilized_state_z_type():
    for field, n in [(GF2, 2), (GF3, 1)]:
        g = MatrixFq.zeros(field, n, n).vstack(MatrixFq.identity(field, n))
        psi = stabilized_state(g)
        mags = np.sort(np.abs(psi.amps))
        assert mags[-1] > 1 - 1e-9 and mags[:-1].max() < 1e-9


def test_stabilized_state_bell():
    psi = stabilized_state(G_EX1)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    # some coset shift of the Bell state matches exactly in modulus
    overlaps = []
    for s_h in itertools.product(range(2), repeat=2):
        shift = (H_EX1 @ MatrixFq.column(GF2, list(s_h))).encodings()[:, 0]
        shifted = weyl_apply(StateVector(GF2, 2, bell), [int(v) for v in shift])
        overlaps.append(abs(np.vdot(shifted.amps, psi.amps)))
    assert max(overlaps) > 1 - 1e-9


def test_stabilized_state_eigenvector_property(rng):
    for field, n in [(GF2, 2), (GF3, 1), (GF4, 1), (GF3, 2), (GF5, 2)]:
        for _ in range(5):
            g = random_sso_generator(field, n, rng)
            psi = stabilized_state(g)
            for i in range(g.cols):
                col = g.col(i)
                for j in range(field.r):
                    mult = field.p**j
                    label = [field.mul(mult, v) for v in col]
                    out = weyl_apply(psi, label).amps
                    lam = np.vdot(psi.amps, out)
                    assert abs(abs(lam) - 1) < 1e-9
                    assert np.allclose(out, lam * psi.amps, atol=1e-9)


def test_coset_basis_orthonormal(rng):
    from nsumbox.qoracle import _coset_basis

    for field, n in [(GF2, 2), (GF3, 2), (GF5, 1)]:
        for _ in range(5):
            spec = build_box(random_sso_generator(field, n, rng))
            psi0 = stabilized_state(spec.g).amps
            basis = _coset_basis(spec, psi0, spec.h)
            gram = basis.conj().T @ basis
            assert np.abs(gram - np.eye(field.q**n)).max() < 1e-7


def test_simulate_box_two_sum_exhaustive():
    spec = build_box(G_EX1, H_EX1)
    offset = simulate_box(spec, [0, 0, 0, 0])
    for x in itertools.product(range(2), repeat=4):
        out = simulate_box(spec, x)
        cal = tuple(GF2.sub(a, b) for a, b in zip(out, offset))
        assert cal == ((x[0] + x[1]) % 2, (x[2] + x[3]) % 2)


def test_simulate_box_z_readout():
    n = 2
    g = MatrixFq.identity(GF3, n).vstack(MatrixFq.zeros(GF3, n, n))
    h = MatrixFq.zeros(GF3, n, n).vstack(MatrixFq.identity(GF3, n))
    spec = build_box(g, h)
    offset = simulate_box(spec, [0] * 4)
    for x in [(1, 2, 0, 1), (0, 0, 2, 2), (2, 1, 1, 0)]:
        out = simulate_box(spec, x)
        cal = tuple(GF3.sub(a, b) for a, b in zip(out, offset))
        assert cal == x[n:]


def test_certify_examples(rng):
    spec = build_box(G_EX1, H_EX1)
    rep = certify(spec, "exhaustive")
    assert rep.passed and rep.tested == 16 and rep.max_prob_defect < 1e-9

    g = MatrixFq(GF3, [[1], [0]])
    rep3 = certify(build_box(g), "exhaustive")
    assert rep3.passed and rep3.tested == 9

    # negative control: corrupt one transfer-matrix entry
    bad_m_data = spec.m.tolist()
    bad_m_data[0][0] ^= 1
    bad = SumBoxSpec(
        field=spec.field, n=spec.n, kappa=spec.kappa,
        g=spec.g, gperp=spec.gperp, h=spec.h, m=MatrixFq(GF2, bad_m_data),
    )
    assert not certify(bad, "exhaustive").passed


def test_certify_random_mode(rng):
    spec = build_box(random_sso_generator(GF3, 2, rng))
    rep = certify(spec, "random", trials=40, seed=5)
    assert rep.passed and rep.tested == 40
    # deterministic in the seed
    rep2 = certify(spec, "random", trials=40, seed=5)
    assert rep2.max_prob_defect == rep.max_prob_defect


def test_certify_too_large():
    g3 = MatrixFq.identity(GF5, 3).vstack(MatrixFq.zeros(GF5, 3, 3))
    with pytest.raises(TooLargeError):
        certify(build_box(g3), "exhaustive")  # 5^6 > 4096


def ex3_spec():
    g = MatrixFq(GF2, [[1], [1], [0], [0]])
    h = MatrixFq(GF2, [[0], [0], [0], [1]])
    return build_box(g, h)


def test_simulate_nonmax_informative_digit():
    spec = ex3_spec()
    res0 = simulate_nonmax(spec, [0, 0, 0, 0], shots=16, seed=0)
    support0 = {res0.outcome_digits(i)[0] for i in np.flatnonzero(res0.probs > 1e-9)}
    assert len(support0) == 1
    offset = support0.pop()
    for x in itertools.product(range(2), repeat=4):
        res = simulate_nonmax(spec, x, shots=1, seed=1)
        support = {res.outcome_digits(i)[0] for i in np.flatnonzero(res.probs > 1e-9)}
        assert len(support) == 1
        assert GF2.sub(support.pop(), offset) == (x[2] + x[3]) % 2
        # the single sample lands in the support
        drawn = int(np.flatnonzero(res.counts)[0])
        assert res.probs[drawn] > 1e-9


def test_simulate_nonmax_discard_uniform():
    spec = ex3_spec()
    res = simulate_nonmax(spec, [1, 1, 1, 0], shots=4096, seed=7)
    live = np.flatnonzero(res.probs > 1e-9)
    assert np.allclose(res.probs[live], 0.5, atol=1e-9)
    second_counts = np.zeros(2)
    for i in live:
        second_counts[res.outcome_digits(i)[1]] += res.counts[i]
    from scipy.stats import chisquare

    assert chisquare(second_counts).pvalue > 0.001
    assert res.counts.sum() == 4096


def test_simulate_nonmax_guards():
    with pytest.raises(DimMismatchError):
        simulate_nonmax(build_box(G_EX1, H_EX1), [0, 0, 0, 0])


def prepare_example2_state(x1, x2, x3, x4):
    """Purified two-qubit protocol on three qubits, gate fixture."""
    h1 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
    u_prep = np.kron(cnot, np.eye(2)) @ np.kron(np.kron(h1, np.eye(2)), np.eye(2))
    phi = np.zeros(8, dtype=complex)
    phi[0b000] = phi[0b011] = 1 / np.sqrt(2)  # |0> tensor Bell
    st = StateVector(GF2, 3, u_prep @ phi)
    st = weyl_apply(st, [x1, x2, 0, x3, x4, 0])
    return StateVector(GF2, 3, u_prep.conj().T @ st.amps)


def test_partial_trace_basics(rng):
    v = rng.normal(size=8) + 1j * rng.normal(size=8)
    v /= np.linalg.norm(v)
    rho = StateVector(GF2, 3, v).density()
    assert np.allclose(partial_trace(rho, [1, 2, 3]).mat, rho.mat)
    # product state: tracing B returns rho_A
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    b = rng.normal(size=4) + 1j * rng.normal(size=4)
    b /= np.linalg.norm(b)
    prod = StateVector(GF2, 3, np.kron(a, b)).density()
    red = partial_trace(prod, [1])
    assert np.allclose(red.mat, np.outer(a, a.conj()), atol=1e-12)
    with pytest.raises(BadIndexSetError):
        partial_trace(rho, [0])
    with pytest.raises(BadIndexSetError):
        partial_trace(rho, [4])


def test_partial_trace_example2_case():
    final = prepare_example2_state(0, 0, 1, 0)
    red = partial_trace(final.density(), [1, 2])
    expect = np.zeros((4, 4), dtype=complex)
    expect[2, 2] = expect[3, 3] = 0.5  # |1><1| tensor I/2
    assert np.abs(red.mat - expect).max() < 1e-9


def test_density_op_guards():
    bad = np.eye(4, dtype=complex)  # trace 4
    with pytest.raises(ValueError):
        DensityOp(GF2, 2, bad)
