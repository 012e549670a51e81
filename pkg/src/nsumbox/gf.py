"""Exact arithmetic in GF(p^r) plus the trace and symplectic bilinear forms.

Elements are represented by their canonical integer encoding
``enc(x) = sum_i c_i * p**i`` where ``(c_0, ..., c_{r-1})`` are the
coordinates of ``x`` in the polynomial basis, low degree first.  All
arithmetic is polynomial arithmetic modulo ``(p, modulus)``.

The modulus of a canonically constructed field (:func:`make_field`) is the
lexicographically smallest monic irreducible polynomial of degree ``r``
over GF(p), coefficients compared low-to-high.  For ``r = 1`` this is the
polynomial ``x`` itself, i.e. the prime field.  A custom irreducible
modulus can be supplied directly to :class:`FieldParams`.

Small fields (q <= 512) carry full addition/multiplication lookup tables,
shared by the pure and compiled matrix kernels; larger extension fields
(q <= 2^20) fall back to exp/log tables for multiplication and digitwise
addition, and prime fields of any size use plain modular arithmetic.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DegreeError,
    FieldMismatchError,
    FieldTooLargeError,
    LengthMismatchError,
    NonPrimeError,
    OddLengthError,
    ReducibleModulusError,
)

MAX_ORDER = 2**31  # desk-scale bound on q = p^r
TABLE_MAX_ORDER = 512  # full q x q tables at or below this order
LOG_TABLE_MAX_ORDER = 2**20  # exp/log tables at or below this order


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test (desk-scale n)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); coefficients are tuples, low degree first
# ---------------------------------------------------------------------------


def _poly_trim(c: Sequence[int]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return tuple(c[:i])


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> tuple[int, ...]:
    """Remainder of a modulo the monic polynomial m, over GF(p)."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim([x % p for x in a[:dm]])


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out

def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a by b over GF(p); b need not be monic."""
    a = [x % p for x in a]
    b = _poly_trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p) if p > 2 else b[-1]
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(_poly_trim(r)) >= len(b):
        r = list(_poly_trim(r))
        shift = len(r) - len(b)
        c = (r[-1] * inv_lead) % p
        q[shift] = c
        for j in range(len(b)):
            r[shift + j] = (r[shift + j] - c * b[j]) % p
    return q, list(_poly_trim(r))


def _poly_is_irreducible(m: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p).

    Degree <= 3 reduces to a root search; degree >= 4 uses trial division
    by every monic polynomial of degree at most deg/2.
    """
    m = list(m)
    deg = len(m) - 1
    if deg == 1:
        return True
    if deg <= 3:
        for x in range(p):
            acc = 0
            for c in reversed(m):
                acc = (acc * x + c) % p
            if acc == 0:
                return False
        return True
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            _, rem = _poly_divmod(m, divisor, p)
            if not rem:
                return False
    return True


# ---------------------------------------------------------------------------
# field parameters
# ---------------------------------------------------------------------------


class FieldParams:
    """Arithmetic context for GF(p^r) with a fixed monic irreducible modulus.

    Instances are immutable and compare equal iff (p, r, modulus) match.
    Scalar arithmetic operates on canonical integer encodings in [0, q).
    """

    __slots__ = (
        "p",
        "r",
        "modulus",
        "q",
        "_exp",
        "_log",
        "_add_t",
        "_mul_t",
        "_neg_t",
        "_inv_t",
        "_pow_p",
    )

    def __init__(self, p: int, r: int, modulus: Sequence[int]):
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
            raise NonPrimeError(f"p = {p} is not prime")
        if not isinstance(r, (int, np.integer)) or int(r) < 1:
            raise DegreeError(f"extension degree r = {r} must be >= 1")
        p, r = int(p), int(r)
        q = p**r
        if q > MAX_ORDER:
            raise FieldTooLargeError(f"q = p^r = {q} exceeds {MAX_ORDER}")
        modulus = tuple(int(c) % p for c in modulus[:-1]) + (int(modulus[-1]),)
        if len(modulus) != r + 1 or modulus[-1] != 1:
            raise ReducibleModulusError(
                f"modulus must be monic of degree {r}, got {modulus}"
            )
        if not _poly_is_irreducible(modulus, p):
            raise ReducibleModulusError(f"modulus {modulus} is reducible over GF({p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_exp", None)
        object.__setattr__(self, "_log", None)
        object.__setattr__(self, "_add_t", None)
        object.__setattr__(self, "_mul_t", None)
        object.__setattr__(self, "_neg_t", None)
        object.__setattr__(self, "_inv_t", None)
        object.__setattr__(self, "_pow_p", None)

    def __setattr__(self, name, value):
        raise AttributeError("FieldParams is immutable")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldParams)
            and self.p == other.p
            and self.r == other.r
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus))

    def __repr__(self) -> str:
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r}; modulus={list(self.modulus)})"

    # -- encoding ----------------------------------------------------------

    def coeffs(self, enc: int) -> tuple[int, ...]:
        """Polynomial-basis coordinates of an encoding, low degree first."""
        enc = self.check_enc(enc)
        out = []
        for _ in range(self.r):
            out.append(enc % self.p)
            enc //= self.p
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.r:
            raise ValueError(f"at most {self.r} coefficients expected")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs))

    def check_enc(self, enc: int) -> int:
        enc = int(enc)
        if not 0 <= enc < self.q:
            raise ValueError(f"encoding {enc} outside [0, {self.q})")
        return enc

    def element(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, self.check_enc(int(value)))
        return FieldElement(self, self.encode(value))

    def elements(self) -> Iterator["FieldElement"]:
        return (FieldElement(self, v) for v in range(self.q))

    # -- scalar arithmetic on encodings -------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        p = self.p
        out, mult = 0, 1
        for _ in range(self.r):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        p = self.p
        out, mult = 0, 1
        for _ in range(self.r):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a * b) % self.p
        if self._mul_t is not None:
            return int(self._mul_t[a, b])
        prod = _poly_mul(self.coeffs(a), self.coeffs(b), self.p)
        return self.encode(_poly_mod(prod, self.modulus, self.p))

    def inv(self, a: int) -> int:
        """Multiplicative inverse, via extended Euclid on polynomials."""
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.r == 1:
            return pow(a, self.p - 2, self.p)
        if self._inv_t is not None:
            return int(self._inv_t[a])
        # extended Euclid: s*a + t*modulus = gcd = 1
        r0, r1 = list(self.modulus), list(self.coeffs(a))
        s0, s1 = [0], [1]
        p = self.p
        while _poly_trim(r1):
            q, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            qs1 = _poly_mul(q, s1, p)
            news = [0] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                news[i] = c
            for i, c in enumerate(qs1):
                news[i] = (news[i] - c) % p
            s0, s1 = s1, _poly_trim(news) or [0]
        lead = _poly_trim(r0)
        if len(lead) != 1:
            raise ZeroDivisionError("gcd with modulus is not a unit")
        scale = pow(lead[0], p - 2, p)
        return self.encode([(c * scale) % p for c in s0])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def frobenius(self, a: int) -> int:
        """x -> x^p."""
        if self._pow_p is not None:
            return int(self._pow_p[a])
        return self.power(a, self.p)

    def trace(self, a: int) -> int:
        """Field trace tr(x) = x + x^p + ... + x^(p^(r-1)), a prime residue."""
        acc, term = 0, a
        for _ in range(self.r):
            acc = self.add(acc, term)
            term = self.frobenius(term)
        # acc lies in the prime subfield: encoding == constant coefficient
        if acc >= self.p:
            raise AssertionError("trace left the prime subfield")
        return acc

    # -- lookup tables -------------------------------------------------------

    def _build_logs(self) -> None:
        if self._exp is not None or self.r == 1:
            return
        if self.q > LOG_TABLE_MAX_ORDER:
            return  # scalar arithmetic only for huge extension fields
        q = self.q
        factors = _prime_factors(q - 1)
        gen = None
        for cand in range(2, q):
            if all(self.power(cand, (q - 1) // f) != 1 for f in factors):
                gen = cand
                break
        if gen is None:
            raise AssertionError("no primitive element found")
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self.mul(v, gen)
        object.__setattr__(self, "_exp", exp)
        object.__setattr__(self, "_log", log)

    def build_tables(self) -> None:
        """Populate q x q add/mul and length-q neg/inv/frobenius tables."""
        if self._mul_t is not None:
            return
        if self.q > TABLE_MAX_ORDER:
            raise FieldTooLargeError(
                f"full tables only built for q <= {TABLE_MAX_ORDER}, got q = {self.q}"
            )
        q, p, r = self.q, self.p, self.r
        enc = np.arange(q, dtype=np.int64)
        digits = np.zeros((q, r), dtype=np.int64)
        tmp = enc.copy()
        for i in range(r):
            digits[:, i] = tmp % p
            tmp //= p
        weights = p ** np.arange(r, dtype=np.int64)
        add_t = (((digits[:, None, :] + digits[None, :, :]) % p) * weights).sum(axis=2)
        neg_t = (((-digits) % p) * weights).sum(axis=1)
        if r == 1:
            mul_t = (enc[:, None] * enc[None, :]) % p
            inv_t = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv_t[a] = pow(a, p - 2, p)
        else:
            self._build_logs()
            exp_, log_ = self._exp, self._log
            mul_t = np.zeros((q, q), dtype=np.int64)
            nz = np.arange(1, q)
            mul_t[1:, 1:] = exp_[(log_[nz][:, None] + log_[nz][None, :]) % (q - 1)]
            inv_t = np.zeros(q, dtype=np.int64)
            inv_t[1:] = exp_[(-log_[nz]) % (q - 1)]
        pow_p = np.zeros(q, dtype=np.int64)
        for a in range(q):
            pow_p[a] = self.power(a, p)
        object.__setattr__(self, "_add_t", np.ascontiguousarray(add_t))
        object.__setattr__(self, "_mul_t", np.ascontiguousarray(mul_t))
        object.__setattr__(self, "_neg_t", np.ascontiguousarray(neg_t))
        object.__setattr__(self, "_inv_t", np.ascontiguousarray(inv_t))
        object.__setattr__(self, "_pow_p", pow_p)

    @property
    def has_tables(self) -> bool:
        return self._mul_t is not None

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(obj: dict) -> "FieldParams":
        return FieldParams(obj["p"], obj["r"], obj["modulus"])


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


@functools.lru_cache(maxsize=None)
def _canonical_modulus(p: int, r: int) -> tuple[int, ...]:
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=r):
        cand = tail + (1,)
        if _poly_is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {r} over GF({p})")


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, r: int, modulus: tuple[int, ...]) -> FieldParams:
    field = FieldParams(p, r, modulus)
    if field.q <= TABLE_MAX_ORDER:
        field.build_tables()
    return field


def make_field(p: int, r: int = 1, modulus: Sequence[int] | None = None) -> FieldParams:
    """Construct GF(p^r).

    Without an explicit modulus, uses the lexicographically smallest monic
    irreducible polynomial of degree r over GF(p) (coefficients compared
    low-to-high), so the construction is deterministic across runs.
    """
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise NonPrimeError(f"p = {p} is not prime")
    if not isinstance(r, (int, np.integer)) or int(r) < 1:
        raise DegreeError(f"extension degree r = {r} must be >= 1")
    if int(p) ** int(r) > MAX_ORDER:
        raise FieldTooLargeError(f"p^r = {int(p)**int(r)} exceeds {MAX_ORDER}")
    if modulus is None:
        modulus = _canonical_modulus(int(p), int(r))
    return _cached_field(int(p), int(r), tuple(int(c) for c in modulus))


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


class FieldElement:
    """A single element of GF(p^r), identified by its canonical encoding."""

    __slots__ = ("field", "val")

    def __init__(self, field: FieldParams, val: int):
        self.field = field
        self.val = field.check_enc(val)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.val)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} vs {other.field}")
            return other.val
        if isinstance(other, (int, np.integer)):
            return self.field.check_enc(int(other))
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(v, self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.val, v))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.val))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.power(self.val, e))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.val))

    def trace(self) -> int:
        return self.field.trace(self.val)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.val == other.val
        if isinstance(other, (int, np.integer)):
            return self.val == int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.val))

    def __int__(self) -> int:
        return self.val

    def __repr__(self) -> str:
        return f"FieldElement({self.val} in {self.field})"


# ---------------------------------------------------------------------------
# spec operations: field_arith / field_inv / field_trace / bilinear forms
# ---------------------------------------------------------------------------


def field_arith(op: str, x: FieldElement, y: FieldElement | None = None) -> FieldElement:
    """Dispatch add/sub/mul/neg by name; operands must share a field."""
    if op == "neg":
        return -x
    if y is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def field_inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def field_trace(x: FieldElement) -> int:
    return x.trace()


def _enc_vector(field: FieldParams, xs: Iterable) -> list[int]:
    out = []
    for x in xs:
        if isinstance(x, FieldElement):
            if x.field != field:
                raise FieldMismatchError("vector element from a different field")
            out.append(x.val)
        else:
            out.append(field.check_enc(int(x)))
    return out


def tracial_form(field: FieldParams, xs: Sequence, ys: Sequence) -> int:
    """tr(sum_i x_i y_i), a prime residue."""
    xv, yv = _enc_vector(field, xs), _enc_vector(field, ys)
    if len(xv) != len(yv):
        raise LengthMismatchError(f"lengths {len(xv)} != {len(yv)}")
    acc = 0
    for a, b in zip(xv, yv):
        acc = field.add(acc, field.mul(a, b))
    return field.trace(acc)


def symplectic_form(field: FieldParams, xs: Sequence, ys: Sequence) -> int:
    """Trace-symplectic form <x, Jy> = tr(sum_n x_{N+n} y_n - x_n y_{N+n})."""
    xv, yv = _enc_vector(field, xs), _enc_vector(field, ys)
    if len(xv) != len(yv):
        raise LengthMismatchError(f"lengths {len(xv)} != {len(yv)}")
    if len(xv) % 2:
        raise OddLengthError("symplectic form needs an even-length vector")
    n = len(xv) // 2
    acc = 0
    for i in range(n):
        acc = field.add(acc, field.mul(xv[n + i], yv[i]))
        acc = field.sub(acc, field.mul(xv[i], yv[n + i]))
    return field.trace(acc)


def bilinear_forms(field: FieldParams, xs: Sequence, ys: Sequence) -> tuple[int, int]:
    """The (tracial, trace-symplectic) pair for equal even-length vectors."""
    return tracial_form(field, xs, ys), symplectic_form(field, xs, ys)
