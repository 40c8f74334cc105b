"""Arithmetic in GF(q) for prime powers q.

Elements are integer codes in [0, q): the base-p digits of a code are the
coefficients of a polynomial over GF(p), constant term least significant.
Code 0 is zero, code 1 is one, and the natural integer order on codes is the
element order used everywhere else in the package.

Hot loops elsewhere work directly on codes through the lookup tables of
:class:`FieldSpec`; :class:`FieldElement` is the user-facing wrapper.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Sequence, Tuple


class FieldError(ValueError):
    """Raised for invalid field orders or mixed-field operations."""


def prime_power(q: int) -> Tuple[int, int]:
    """Return ``(p, t)`` with ``q == p**t``, or raise FieldError."""
    if not isinstance(q, int) or q < 2:
        raise FieldError(f"{q!r} is not a prime power")
    p = next(d for d in itertools.count(2) if q % d == 0)
    t = 0
    n = q
    while n % p == 0:
        n //= p
        t += 1
    if n != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, t


# --- polynomials over GF(p), coefficient lists with constant term first ---

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> List[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    lead_inv = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * lead_inv % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _monic_polys(p: int, d: int):
    """Monic degree-d polynomials, ordered by (c_{d-1}, ..., c_0) ascending."""
    for high_first in itertools.product(range(p), repeat=d):
        yield list(reversed(high_first)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive factor search; fine for the small degrees used here."""
    t = len(poly) - 1
    if t < 1:
        return False
    if t == 1:
        return True
    for d in range(1, t // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


def smallest_irreducible(p: int, t: int) -> Tuple[int, ...]:
    for f in _monic_polys(p, t):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("an irreducible polynomial exists for every degree")


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^t) with a fixed monic irreducible modulus.

    ``add``, ``mul``, ``neg`` and ``inv`` are lookup tables indexed by
    element codes (``inv[0]`` is -1). For t = 1 the modulus is the
    placeholder ``x`` and arithmetic is plain mod-p.
    """

    p: int
    t: int
    modulus: Tuple[int, ...]
    add: Tuple[Tuple[int, ...], ...] = field(repr=False, compare=False)
    mul: Tuple[Tuple[int, ...], ...] = field(repr=False, compare=False)
    neg: Tuple[int, ...] = field(repr=False, compare=False)
    inv: Tuple[int, ...] = field(repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p ** self.t

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def __call__(self, code: int) -> "FieldElement":
        return FieldElement(self, code)

    def elements(self) -> List["FieldElement"]:
        return elements(self)

    def digits(self, code: int) -> List[int]:
        """Polynomial coefficients of ``code``, constant term first."""
        return [(code // self.p ** i) % self.p for i in range(self.t)]

    def __str__(self) -> str:
        return f"GF({self.q})"


def _encode(coeffs: Sequence[int], p: int) -> int:
    return sum(c * p ** i for i, c in enumerate(coeffs))


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build GF(q) with the lexicographically smallest monic irreducible modulus."""
    p, t = prime_power(q)
    modulus = (0, 1) if t == 1 else smallest_irreducible(p, t)
    digits = [[(c // p ** i) % p for i in range(t)] for c in range(q)]

    add = tuple(
        tuple(_encode([(x + y) % p for x, y in zip(digits[a], digits[b])], p) for b in range(q))
        for a in range(q)
    )
    neg = tuple(_encode([(-x) % p for x in digits[a]], p) for a in range(q))

    def poly_mul(a: int, b: int) -> int:
        if t == 1:
            return a * b % p
        prod = [0] * (2 * t - 1)
        for i, x in enumerate(digits[a]):
            if x:
                for j, y in enumerate(digits[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return _encode(_poly_mod(prod, modulus, p), p)

    mul = tuple(tuple(poly_mul(a, b) for b in range(q)) for a in range(q))
    inv = [-1] * q
    for a in range(1, q):
        inv[a] = mul[a].index(1)
    return FieldSpec(p, t, tuple(modulus), add, mul, neg, tuple(inv))


@dataclass(frozen=True)
class FieldElement:
    """An element of a specific GF(q), identified by its integer code."""

    field: FieldSpec
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise FieldError(f"code {self.code} out of range for {self.field}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"cannot combine elements of {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            # integers act through the prime subfield
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add[self.code][b])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg[self.code])

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul[self.code][b])

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.field}")
        return FieldElement(self.field, self.field.inv[self.code])

    def __truediv__(self, other):
        return self * FieldElement(self.field, self._other(other)).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = 1, self.code
        mul = self.field.mul
        while n:
            if n & 1:
                result = mul[result][base]
            base = mul[base][base]
            n >>= 1
        return FieldElement(self.field, result)

    def __int__(self) -> int:
        return self.code

    def __repr__(self) -> str:
        return f"{self.field}({self.code})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def neg(a: FieldElement) -> FieldElement:
    return -a


def sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def power(a: FieldElement, n: int) -> FieldElement:
    return a ** n


def elements(spec: FieldSpec) -> List[FieldElement]:
    """All q elements in ascending code order."""
    return [FieldElement(spec, c) for c in range(spec.q)]
