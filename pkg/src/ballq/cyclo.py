"""Exact arithmetic in Q(zeta_12), its reductions to F_4 and F_9, and the complex embedding.

Elements are stored on the basis (1, z, z^2, z^3) where z is a primitive 12th root
of unity with minimal polynomial x^4 - x^2 + 1, so z^4 = z^2 - 1 and z^6 = -1.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]

ZETA_C = cmath.exp(1j * cmath.pi / 6)
_POWERS_C = (1.0 + 0j, ZETA_C, ZETA_C**2, 1j)


def _mul_coeffs(a: Sequence, b: Sequence) -> tuple:
    """Product of two coefficient 4-tuples, reduced modulo z^4 - z^2 + 1."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    c0 = a0 * b0
    c1 = a0 * b1 + a1 * b0
    c2 = a0 * b2 + a1 * b1 + a2 * b0
    c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
    c4 = a1 * b3 + a2 * b2 + a3 * b1
    c5 = a2 * b3 + a3 * b2
    c6 = a3 * b3
    # z^4 = z^2 - 1, z^5 = z^3 - z, z^6 = -1
    return (c0 - c4 - c6, c1 - c5, c2 + c4, c3 + c5)


def _conj_coeffs(a: Sequence) -> tuple:
    c0, c1, c2, c3 = a
    return (c0 + c2, c1, -c2, -c1 - c3)


def _zeta_times(a: Sequence) -> tuple:
    c0, c1, c2, c3 = a
    return (-c3, c0, c1 + c3, c2)


class CycNum:
    """An element c0 + c1 z + c2 z^2 + c3 z^3 of Q(zeta_12) with exact rational coordinates."""

    __slots__ = ("c",)

    def __init__(self, c0: Rational = 0, c1: Rational = 0, c2: Rational = 0, c3: Rational = 0):
        self.c = tuple(_canon_rational(x) for x in (c0, c1, c2, c3))

    @classmethod
    def _raw(cls, coeffs: Iterable) -> CycNum:
        obj = object.__new__(cls)
        obj.c = tuple(_canon_rational(x) for x in coeffs)
        return obj

    @classmethod
    def zeta(cls, k: int = 1) -> CycNum:
        x = (1, 0, 0, 0)
        for _ in range(k % 12):
            x = _zeta_times(x)
        return cls._raw(x)

    @classmethod
    def coerce(cls, x) -> CycNum:
        if isinstance(x, CycNum):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CycNum")

    def __repr__(self) -> str:
        return "CycNum(%s)" % ", ".join(str(x) for x in self.c)

    def __str__(self) -> str:
        terms = []
        for k, x in enumerate(self.c):
            if x == 0:
                continue
            mono = ("", "z", "z^2", "z^3")[k]
            if mono and x in (1, -1):
                terms.append(("-" if x < 0 else "+") + mono)
            else:
                terms.append(f"{x:+}" if not mono else f"{x:+}*{mono}")
        if not terms:
            return "0"
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s

    def __eq__(self, other) -> bool:
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def __add__(self, other) -> CycNum:
        other = CycNum.coerce(other)
        return CycNum._raw(x + y for x, y in zip(self.c, other.c))

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum._raw(-x for x in self.c)

    def __sub__(self, other) -> CycNum:
        return self + (-CycNum.coerce(other))

    def __rsub__(self, other) -> CycNum:
        return CycNum.coerce(other) - self

    def __mul__(self, other) -> CycNum:
        if isinstance(other, (int, Fraction)):
            return CycNum._raw(x * other for x in self.c)
        other = CycNum.coerce(other)
        return CycNum._raw(_mul_coeffs(self.c, other.c))

    __rmul__ = __mul__

    def __truediv__(self, other) -> CycNum:
        return self * CycNum.coerce(other).inverse()

    def __rtruediv__(self, other) -> CycNum:
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> CycNum:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CycNum(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> CycNum:
        """Image under complex conjugation z -> z^-1."""
        return CycNum._raw(_conj_coeffs(self.c))

    def galois(self, k: int) -> CycNum:
        """Image under the automorphism z -> z^k, k in {1, 5, 7, 11}."""
        if k % 12 not in (1, 5, 7, 11):
            raise ValueError("k must be a unit mod 12")
        zk = CycNum.zeta(k)
        out, p = CycNum(0), CycNum(1)
        for coeff in self.c:
            out = out + p * coeff
            p = p * zk
        return out

    def norm(self) -> Fraction:
        """The absolute norm to Q."""
        prod = self.galois(1) * self.galois(5) * self.galois(7) * self.galois(11)
        if any(prod.c[1:]):
            raise ArithmeticError("norm is not rational; corrupted element")
        return Fraction(prod.c[0])

    def inverse(self) -> CycNum:
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta_12)")
        cofactor = self.galois(5) * self.galois(7) * self.galois(11)
        n = (self * cofactor).c[0]
        return CycNum._raw(Fraction(x) / n for x in cofactor.c)

    def embed(self) -> complex:
        """Value in C with z = exp(i pi / 6)."""
        return sum((float(x) * p for x, p in zip(self.c, _POWERS_C)), 0j)

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in self.c)

    def denominator(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in self.c), 1)

    def int_coeffs(self) -> tuple:
        if not self.is_integral():
            raise ValueError(f"{self} is not in Z[zeta]")
        return tuple(int(x) for x in self.c)


def _canon_rational(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"coordinates must be int or Fraction, got {type(x).__name__}")


ZERO = CycNum(0)
ONE = CycNum(1)
ZETA = CycNum(0, 1)
R = ZETA + ZETA.conj()  # sqrt(3) = 2z - z^3
OMEGA = CycNum.zeta(4)  # exp(2 pi i / 3)
I_UNIT = CycNum.zeta(3)


def arith(x: CycNum, y: CycNum, op: str) -> CycNum:
    """Field operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def conj(x: CycNum) -> CycNum:
    return x.conj()


def embed(x: CycNum) -> complex:
    return x.embed()


# ---------------------------------------------------------------------------
# F_4 = F_2[w] (w^2 + w + 1 = 0) and F_9 = F_3[i] (i^2 = -1)
# Elements are coded as a + p*b for a + b*delta; the tables below drive bulk work.


class _FieldTables:
    def __init__(self, p: int):
        self.p = p
        self.q = p * p
        q = self.q
        self.add = [[0] * q for _ in range(q)]
        self.mul = [[0] * q for _ in range(q)]
        for x in range(q):
            a, b = x % p, x // p
            for y in range(q):
                c, d = y % p, y // p
                self.add[x][y] = (a + c) % p + p * ((b + d) % p)
                if p == 2:
                    # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = 1 + w
                    e = a * c + b * d
                    f = a * d + b * c + b * d
                else:
                    # (a + bi)(c + di) = ac - bd + (ad + bc)i
                    e = a * c - b * d
                    f = a * d + b * c
                self.mul[x][y] = e % p + p * (f % p)
        self.neg = [((-(x % p)) % p) + p * ((-(x // p)) % p) for x in range(q)]
        self.inv = [0] * q
        for x in range(1, q):
            for y in range(1, q):
                if self.mul[x][y] == 1:
                    self.inv[x] = y
        # image of z, z^2, z^3 for the reduction z -> w (p=2) or z -> i (p=3)
        delta = p  # code of the element "delta"
        self.zpow = [1, delta, self.mul[delta][delta], self.mul[self.mul[delta][delta]][delta]]

    def from_int(self, n: int) -> int:
        return n % self.p

    def reduce_int_coeffs(self, coeffs: Sequence[int]) -> int:
        acc = 0
        for k, c in enumerate(coeffs):
            if c % self.p:
                acc = self.add[acc][self.mul[c % self.p][self.zpow[k]]]
        return acc

    def power(self, x: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self.mul[result][x]
            x = self.mul[x][x]
            n >>= 1
        return result


FIELDS = {2: _FieldTables(2), 3: _FieldTables(3)}


class GFElem:
    """Element a + b*delta of F_4 (delta = w) or F_9 (delta = i)."""

    __slots__ = ("characteristic", "code")

    def __init__(self, characteristic: int, a: int = 0, b: int = 0):
        if characteristic not in FIELDS:
            raise ValueError("characteristic must be 2 or 3")
        p = characteristic
        self.characteristic = p
        self.code = a % p + p * (b % p)

    @classmethod
    def from_code(cls, p: int, code: int) -> GFElem:
        obj = object.__new__(cls)
        obj.characteristic = p
        obj.code = code
        return obj

    @property
    def a(self) -> int:
        return self.code % self.characteristic

    @property
    def b(self) -> int:
        return self.code // self.characteristic

    @property
    def _t(self) -> _FieldTables:
        return FIELDS[self.characteristic]

    def _check(self, other) -> GFElem:
        if isinstance(other, int):
            return GFElem(self.characteristic, other)
        if not isinstance(other, GFElem) or other.characteristic != self.characteristic:
            raise TypeError("mixed fields")
        return other

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = GFElem(self.characteristic, other)
        if not isinstance(other, GFElem):
            return NotImplemented
        return self.characteristic == other.characteristic and self.code == other.code

    def __hash__(self) -> int:
        return hash((self.characteristic, self.code))

    def __repr__(self) -> str:
        name = "w" if self.characteristic == 2 else "i"
        return f"GF{self.characteristic ** 2}({self.a} + {self.b}{name})"

    def __add__(self, other) -> GFElem:
        other = self._check(other)
        return GFElem.from_code(self.characteristic, self._t.add[self.code][other.code])

    __radd__ = __add__

    def __neg__(self) -> GFElem:
        return GFElem.from_code(self.characteristic, self._t.neg[self.code])

    def __sub__(self, other) -> GFElem:
        return self + (-self._check(other))

    def __mul__(self, other) -> GFElem:
        other = self._check(other)
        return GFElem.from_code(self.characteristic, self._t.mul[self.code][other.code])

    __rmul__ = __mul__

    def inverse(self) -> GFElem:
        if self.code == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return GFElem.from_code(self.characteristic, self._t.inv[self.code])

    def __truediv__(self, other) -> GFElem:
        return self * self._check(other).inverse()


def _rational_mod(x: Rational, ft: _FieldTables) -> int:
    x = Fraction(x)
    den = x.denominator % ft.p
    if den == 0:
        raise ZeroDivisionError(f"denominator {x.denominator} not invertible mod {ft.p}")
    # Fermat: den^(p-2) is the inverse in F_p
    inv = pow(den, ft.p - 2, ft.p)
    return (x.numerator * inv) % ft.p


def reduce_mod(x: CycNum, p: int) -> GFElem:
    """Ring morphism Z[z]_(p) -> F_4 (z -> w) or F_9 (z -> i)."""
    ft = FIELDS[p]
    coeffs = [_rational_mod(c, ft) for c in x.c]
    return GFElem.from_code(p, ft.reduce_int_coeffs(coeffs))
