"""Field arithmetic, trace, and bilinear-form tests."""

import itertools

import numpy as np
import pytest

from nsumbox import make_field
from nsumbox.errors import (
    DegreeError,
    FieldMismatchError,
    FieldTooLargeError,
    NonPrimeError,
    OddLengthError,
    ReducibleModulusError,
)
from nsumbox.gf import (
    FieldParams,
    bilinear_forms,
    field_arith,
    field_inv,
    field_trace,
    symplectic_form,
    tracial_form,
)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (3, 4), (2, 6)]


def brute_force_smallest_irreducible(p, r):
    """Independent oracle: enumerate monic degree-r polynomials low-to-high
    and return the first with no factorization into smaller monics."""

    def poly_eval_all_roots(coeffs):
        return any(
            sum(c * x**i for i, c in enumerate(coeffs)) % p == 0 for x in range(p)
        )

    def divides(div, poly):
        poly = list(poly)
        dd = len(div) - 1
        for i in range(len(poly) - 1, dd - 1, -1):
            c = poly[i] % p
            if c:
                inv_lead = pow(div[-1], p - 2, p) if p > 2 else div[-1]
                f = (c * inv_lead) % p
                for k in range(dd + 1):
                    poly[i - dd + k] = (poly[i - dd + k] - f * div[k]) % p
        return not any(v % p for v in poly[:dd])

    for tail in itertools.product(range(p), repeat=r):
        cand = list(tail) + [1]
        if r == 1:
            return tuple(cand)
        if r <= 3:
            if not poly_eval_all_roots(cand):
                return tuple(cand)
            continue
        good = True
        for d in range(1, r // 2 + 1):
            for t2 in itertools.product(range(p), repeat=d):
                if divides(list(t2) + [1], cand):
                    good = False
                    break
            if not good:
                break
        if good:
            return tuple(cand)
    raise AssertionError


def test_make_field_prime_conventions():
    f2 = make_field(2, 1)
    assert f2.q == 2 and f2.modulus == (0, 1)
    f3 = make_field(3)
    assert f3.q == 3
    assert f3.mul(2, 2) == 1  # 4 mod 3


@pytest.mark.parametrize("p,r", [(3, 2), (2, 2), (2, 3), (5, 2), (3, 3), (2, 5)])
def test_canonical_modulus_matches_enumeration_oracle(p, r):
    assert make_field(p, r).modulus == brute_force_smallest_irreducible(p, r)


def test_make_field_errors():
    with pytest.raises(NonPrimeError):
        make_field(4)
    with pytest.raises(NonPrimeError):
        make_field(1)
    with pytest.raises(DegreeError):
        make_field(2, 0)
    with pytest.raises(FieldTooLargeError):
        make_field(2, 40)
    with pytest.raises(ReducibleModulusError):
        FieldParams(2, 2, [1, 0, 1])  # x^2 + 1 has root 1 over GF(2)
    with pytest.raises(ReducibleModulusError):
        FieldParams(2, 2, [1, 1])  # wrong degree


def test_custom_modulus_presentation_of_gf9():
    f9 = make_field(3, 2, modulus=[2, 1, 1])  # x^2 + x + 2
    alpha = f9.element([0, 1])
    # alpha^2 = -alpha - 2 = 2 alpha + 1
    assert (alpha * alpha).coeffs == (1, 2)
    assert f9 != make_field(3, 2)


def test_field_arith_dispatch_and_identities():
    f4 = make_field(2, 2)
    alpha = f4.element([0, 1])
    zero, one = f4.element(0), f4.element(1)
    assert field_arith("add", alpha, zero) == alpha
    assert field_arith("mul", alpha, alpha) == f4.element([1, 1])  # alpha^2 = alpha+1
    assert field_arith("sub", alpha, alpha) == zero
    assert field_arith("neg", alpha) == alpha  # characteristic 2
    with pytest.raises(ValueError):
        field_arith("pow", alpha, one)
    f3 = make_field(3)
    with pytest.raises(FieldMismatchError):
        field_arith("add", f3.element(1), alpha)


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_add_mul_against_polynomial_oracle(p, r):
    """Scalar arithmetic must agree with direct polynomial arithmetic mod
    (p, modulus) computed from scratch."""
    field = make_field(p, r)
    rng = np.random.default_rng(p * 100 + r)
    mod = list(field.modulus)

    def poly_mul_mod(a, b):
        prod = [0] * (2 * r - 1)
        for i in range(r):
            for j in range(r):
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p
        for i in range(len(prod) - 1, r - 1, -1):
            c = prod[i]
            if c:
                for k in range(r + 1):
                    prod[i - r + k] = (prod[i - r + k] - c * mod[k]) % p
        return prod[:r]

    for _ in range(50):
        x, y = int(rng.integers(0, field.q)), int(rng.integers(0, field.q))
        cx, cy = list(field.coeffs(x)), list(field.coeffs(y))
        assert field.add(x, y) == field.encode([(a + b) % p for a, b in zip(cx, cy)])
        assert field.mul(x, y) == field.encode(poly_mul_mod(cx, cy))


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (3, 4)])
def test_inverse_exhaustive(p, r):
    field = make_field(p, r)
    assert field.q <= 81
    for x in range(1, field.q):
        assert field.mul(x, field.inv(x)) == 1
    with pytest.raises(ZeroDivisionError):
        field.inv(0)
    assert field_inv(field.element(1)) == field.element(1)


def test_inverse_examples():
    assert make_field(3).inv(2) == 2
    assert make_field(5).inv(3) == 2


def mult_map_matrix_trace(field, x):
    """Independent oracle: trace of the matrix of y -> x*y in the
    polynomial basis over GF(p)."""
    tr = 0
    for i in range(field.r):
        image = field.mul(x, field.encode([0] * i + [1]))
        tr = (tr + field.coeffs(image)[i]) % field.p
    return tr


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2), (3, 4), (2, 6)])
def test_trace_equals_multiplication_matrix_trace(p, r):
    field = make_field(p, r)
    for x in range(field.q):
        assert field.trace(x) == mult_map_matrix_trace(field, x)


def test_trace_examples():
    f4 = make_field(2, 2)
    assert field_trace(f4.element(0)) == 0
    assert field_trace(f4.element(1)) == 0  # 1 + 1^2 = 0 over GF(2)
    f5 = make_field(5)
    for x in range(5):
        assert f5.trace(x) == x  # identity on prime fields


@pytest.mark.parametrize("p,r", [(3, 2), (2, 3), (5, 2)])
def test_trace_prime_linearity(p, r, rng):
    field = make_field(p, r)
    for _ in range(100):
        x, y = (int(v) for v in rng.integers(0, field.q, size=2))
        c = int(rng.integers(0, p))  # prime subfield scalar
        assert field.trace(field.add(x, y)) == (field.trace(x) + field.trace(y)) % p
        assert field.trace(field.mul(c, x)) == (c * field.trace(x)) % p


def test_bilinear_form_values():
    f2, f3 = make_field(2), make_field(3)
    assert bilinear_forms(f2, [0, 0, 0, 0], [0, 0, 0, 0]) == (0, 0)
    # the two-sum generators commute
    assert symplectic_form(f2, (1, 1, 0, 0), (0, 0, 1, 1)) == 0
    # <(1,0), J (0,1)> = tr(-1) = 2 over GF(3)
    assert symplectic_form(f3, (1, 0), (0, 1)) == 2
    assert tracial_form(f3, (1, 2), (2, 2)) == (2 + 4) % 3


def test_symplectic_form_antisymmetry(rng):
    for field in (make_field(3), make_field(2, 2), make_field(5)):
        for _ in range(100):
            x = [int(v) for v in rng.integers(0, field.q, size=6)]
            y = [int(v) for v in rng.integers(0, field.q, size=6)]
            sxy = symplectic_form(field, x, y)
            syx = symplectic_form(field, y, x)
            assert (sxy + syx) % field.p == 0
            assert symplectic_form(field, x, x) == 0


def test_symplectic_form_prime_bilinearity(rng):
    field = make_field(3, 2)
    p = field.p
    for _ in range(50):
        x, y, z = (
            [int(v) for v in rng.integers(0, field.q, size=4)] for _ in range(3)
        )
        xy = [field.add(a, b) for a, b in zip(x, y)]
        assert symplectic_form(field, xy, z) == (
            symplectic_form(field, x, z) + symplectic_form(field, y, z)
        ) % p
        c = int(rng.integers(0, p))
        cx = [field.mul(c, a) for a in x]
        assert symplectic_form(field, cx, z) == (c * symplectic_form(field, x, z)) % p


def test_form_length_errors():
    f3 = make_field(3)
    with pytest.raises(OddLengthError):
        symplectic_form(f3, [1, 2, 0], [0, 1, 2])
    with pytest.raises(Exception):
        tracial_form(f3, [1, 2], [1])


def test_gf9_paper_presentation_traces():
    """The self-orthogonal-but-not-SSO example lives in GF(9) with modulus
    x^2 + x + 2: tr(alpha + 2) = 0 yet tr(2 alpha + alpha^2) != 0."""
    f9 = make_field(3, 2, modulus=[2, 1, 1])
    alpha = 3  # encoding of x
    assert f9.trace(f9.add(alpha, 2)) == 0
    val = f9.add(f9.mul(2, alpha), f9.mul(alpha, alpha))
    assert f9.trace(val) != 0
