"""Exact arithmetic in odd-characteristic finite fields GF(p^r).

Elements are stored as integer codes in ``range(q)``: the code of
``c_0 + c_1 x + ... + c_{r-1} x^{r-1}`` is ``c_0 + c_1 p + ... + c_{r-1} p^{r-1}``
(constant term least significant).  This is also the canonical element
order used for vertex indexing downstream.

All arithmetic goes through precomputed integer tables, so the vectorized
kernels in the other modules can index them with numpy arrays directly.
Floating point appears only in :func:`add_char` and :attr:`Field.char_table`.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .exceptions import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    NotPrime,
    ReducibleModulus,
)

MAX_ORDER = 2048  # table-backed arithmetic; q^2 entries per table


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, r)`` with ``q == p**r``; raise NotPrime otherwise."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    r, rest = 0, q
    while rest % p == 0:
        rest //= p
        r += 1
    if rest != 1 or not is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    return p, r


# -- polynomials over GF(p), coefficient lists low -> high -------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = _trim(list(m))
    inv_lead = pow(m[-1], -1, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive factor search: no monic factor of degree 1..deg//2 divides."""
    r = len(modulus) - 1
    for k in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _poly_rem(modulus, list(low) + [1], p):
                return False
    return True


def default_modulus(p: int, r: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree r.

    Candidates ``x^r + c_{r-1} x^{r-1} + ... + c_0`` are ordered
    lexicographically on ``(c_{r-1}, ..., c_0)``.
    """
    for high_first in itertools.product(range(p), repeat=r):
        cand = list(reversed(high_first)) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ReducibleModulus(f"no irreducible polynomial of degree {r} over GF({p})")


class Field:
    """The finite field GF(p^r) for an odd prime p.

    Use :func:`make_field` to construct one.  Instances are immutable; the
    arithmetic tables are read-only numpy arrays indexed by element codes.

    Attributes:
        p, r, q: characteristic, extension degree and order ``p**r``.
        modulus: defining polynomial, coefficients low -> high (``(0, 1)``,
            i.e. ``x``, for prime fields).
        add_table, sub_table, mul_table: ``(q, q)`` int arrays.
        neg_table, inv_table: ``(q,)`` arrays; ``inv_table[0] == -1``.
        trace_table: absolute trace of each element, in ``range(p)``.
        char_table: ``exp(2 pi i Tr(s) / p)`` for each element ``s``.
    """

    def __init__(self, p: int, r: int, modulus: tuple[int, ...]):
        self.p = p
        self.r = r
        self.q = p**r
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self) -> None:
        p, r, q = self.p, self.r, self.q
        codes = np.arange(q)
        digits = np.stack([(codes // p**i) % p for i in range(r)], axis=1)
        weights = p ** np.arange(r)

        def combine(dig):
            return (dig % p) @ weights

        add = combine(digits[:, None, :] + digits[None, :, :])
        sub = combine(digits[:, None, :] - digits[None, :, :])
        neg = combine(-digits)

        # multiplication via discrete logs to a primitive element
        gen, exp = self._primitive_powers()
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        lsum = (log[:, None] + log[None, :]) % (q - 1)
        mul = np.where((codes[:, None] == 0) | (codes[None, :] == 0), 0, exp[lsum])
        inv = np.full(q, -1, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (q - 1)]

        # Tr(y) = y + y^p + ... + y^(p^(r-1))
        trace = np.zeros(q, dtype=np.int64)
        for y in range(q):
            term, total = y, 0
            for _ in range(r):
                total = add[total, term]
                term = self._pow_code(term, p, mul)
            if total >= p:
                raise AssertionError("trace left the prime field")
            trace[y] = total

        self.generator = int(gen)
        self.digits = digits
        self.add_table = add.astype(np.int64)
        self.sub_table = sub.astype(np.int64)
        self.neg_table = neg.astype(np.int64)
        self.mul_table = mul.astype(np.int64)
        self.inv_table = inv
        self.log_table = log
        self.exp_table = exp
        self.trace_table = trace
        self.char_table = np.exp(2j * np.pi * trace / p)
        for arr in (self.digits, self.add_table, self.sub_table, self.neg_table,
                    self.mul_table, self.inv_table, self.log_table,
                    self.exp_table, self.trace_table, self.char_table):
            arr.setflags(write=False)

    @staticmethod
    def _pow_code(a: int, e: int, mul) -> int:
        out = 1
        for _ in range(e):
            out = mul[out, a]
        return int(out)

    def _code_to_poly(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.r)]

    def _poly_to_code(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mul(_trim(self._code_to_poly(a)), _trim(self._code_to_poly(b)), self.p)
        return self._poly_to_code(_poly_rem(prod, self.modulus, self.p))

    def _primitive_powers(self) -> tuple[int, np.ndarray]:
        q = self.q
        for g in range(1, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == q - 1:
                return g, np.array(powers, dtype=np.int64)
        raise AssertionError("multiplicative group is not cyclic")  # pragma: no cover

    # -- element construction ------------------------------------------------

    def __call__(self, value) -> FieldElement:
        """Coerce an int code, coefficient list, or FieldElement into this field.

        An int is read as the canonical code; for prime fields this is just
        the residue ``value mod p``.
        """
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, (int, np.integer)):
            if self.r == 1:
                return FieldElement(self, int(value) % self.p)
            if not 0 <= value < self.q:
                raise ValueError(f"code {value} out of range for GF({self.q})")
            return FieldElement(self, int(value))
        coeffs = list(value)
        if len(coeffs) != self.r or not all(0 <= int(c) < self.p for c in coeffs):
            raise ValueError(f"expected {self.r} coefficients in [0, {self.p})")
        return FieldElement(self, self._poly_to_code(coeffs))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> Iterator[FieldElement]:
        """All elements in canonical order."""
        for a in range(self.q):
            yield FieldElement(self, a)

    def nonzero(self) -> list[FieldElement]:
        return [FieldElement(self, a) for a in range(1, self.q)]

    def __len__(self) -> int:
        return self.q

    def __eq__(self, other) -> bool:
        return (isinstance(other, Field) and self.p == other.p and self.r == other.r
                and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.r, self.modulus))

    def __repr__(self) -> str:
        if self.r == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.r}, modulus={list(self.modulus)})"

    # -- squares -------------------------------------------------------------

    def is_square(self, a) -> bool:
        a = self(a).value
        return a == 0 or self.log_table[a] % 2 == 0

    def nonresidue(self) -> FieldElement:
        """The non-square with the smallest code."""
        for a in range(1, self.q):
            if self.log_table[a] % 2 == 1:
                return FieldElement(self, a)
        raise AssertionError("odd-order field has no non-square")  # pragma: no cover

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> Field:
        modulus = data.get("modulus")
        if modulus is not None and int(data.get("r", 1)) == 1:
            modulus = None
        return make_field(int(data["p"]), int(data.get("r", 1)), modulus)

    def encode(self, a) -> list[int]:
        """Coefficient array ``[c0, ..., c_{r-1}]`` of an element."""
        code = a.value if isinstance(a, FieldElement) else int(a)
        return [int(c) for c in self.digits[code]]

    def decode(self, obj) -> FieldElement:
        """Inverse of :meth:`encode`; a bare int is accepted as a code."""
        if isinstance(obj, bool):
            raise ValueError("booleans are not field elements")
        return self(obj)


@dataclass(frozen=True, slots=True)
class FieldElement:
    """An element of a :class:`Field`, held by its canonical code."""

    field: Field
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.digits[self.value])

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field(other).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.add_table[self.value, b]))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.sub_table[self.value, b]))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.sub_table[b, self.value]))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.mul_table[self.value, b]))

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.value]))

    def inverse(self) -> FieldElement:
        if self.value == 0:
            raise DivisionByZero("zero has no multiplicative inverse")
        return FieldElement(self.field, int(self.field.inv_table[self.value]))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.field, b).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.value == 0:
            return FieldElement(self.field, 1 if e == 0 else 0)
        q = self.field.q
        log = int(self.field.log_table[self.value])
        return FieldElement(self.field, int(self.field.exp_table[(log * e) % (q - 1)]))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        if self.field.r == 1:
            return f"{self.value} (mod {self.field.p})"
        return f"{list(self.coeffs)} in {self.field!r}"


def make_field(p: int, r: int = 1, modulus: Sequence[int] | None = None) -> Field:
    """Build and validate GF(p^r).

    Args:
        p: odd prime characteristic.
        r: extension degree.
        modulus: monic defining polynomial of degree ``r``, coefficients
            low -> high (``[1, 0, 1]`` is ``x^2 + 1``).  Chosen by
            :func:`default_modulus` when omitted.

    Raises:
        EvenCharacteristic: p == 2.
        NotPrime: p is not prime.
        ReducibleModulus: the modulus is not irreducible over GF(p).
    """
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if r < 1:
        raise ValueError("extension degree must be >= 1")
    if p**r > MAX_ORDER:
        raise ValueError(f"GF({p}^{r}) exceeds the table limit {MAX_ORDER}")
    if r == 1:
        if modulus is not None and len(modulus) != 2:
            raise ValueError("a prime field modulus must be linear")
        return Field(p, 1, (0, 1))
    if modulus is None:
        modulus = default_modulus(p, r)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) != r + 1 or modulus[-1] != 1:
        raise ValueError(f"modulus must be monic of degree {r}")
    if not is_irreducible(modulus, p):
        raise ReducibleModulus(f"{list(modulus)} is reducible over GF({p})")
    return Field(p, r, modulus)


def _check(a: FieldElement, b: FieldElement) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a + b


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check(a, b)
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def trace(y: FieldElement) -> int:
    """Absolute trace ``y + y^p + ... + y^(p^(r-1))`` as a residue mod p."""
    return int(y.field.trace_table[y.value])


def add_char(s: FieldElement) -> complex:
    """Canonical additive character ``exp(2 pi i Tr(s) / p)``."""
    return cmath.exp(2j * math.pi * trace(s) / s.field.p)
