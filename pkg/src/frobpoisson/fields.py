"""Exact scalar fields: the rationals and prime fields GF(p), p odd.

Rational scalars are plain ``int`` or ``fractions.Fraction`` values so the
integer-valued case (every shipped example) runs on Python ints.  Never divide
scalars with ``/``; use :meth:`Field.div`, which is exact in both fields.
"""

from __future__ import annotations

import functools
from fractions import Fraction


class FieldError(ValueError):
    pass


class Field:
    name = "?"
    characteristic = 0

    def __call__(self, x):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        return self.div(1, a)

    def __repr__(self):
        return self.name

    def __str__(self):
        return self.name


class RationalField(Field):
    name = "Q"

    def __call__(self, x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Mod):
            raise FieldError("cannot coerce a GF(p) element into Q")
        q = Fraction(x)
        return q.numerator if q.denominator == 1 else q

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        q = Fraction(a) / Fraction(b)
        return q.numerator if q.denominator == 1 else q


QQ = RationalField()


class Mod:
    """A residue class modulo an odd prime."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Mod):
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Mod({self.v}, {self.p})"

    def __str__(self):
        # symmetric representative reads better in reports
        v = self.v if self.v <= self.p // 2 else self.v - self.p
        return str(v)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField(Field):
    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if p == 2:
            raise FieldError("characteristic 2 is not supported")
        self.p = p
        self.characteristic = p
        self.name = f"F{p}"

    def __call__(self, x):
        if isinstance(x, Mod):
            if x.p != self.p:
                raise FieldError(f"element of F{x.p} used in F{self.p}")
            return x
        if isinstance(x, int):
            return Mod(x, self.p)
        q = Fraction(x)
        if q.denominator % self.p == 0:
            raise FieldError(f"{q} has no image in F{self.p}")
        return Mod(q.numerator * pow(q.denominator, -1, self.p), self.p)

    def div(self, a, b):
        b = self(b)
        if not b:
            raise ZeroDivisionError(f"division by zero in F{self.p}")
        return self(a) * Mod(pow(b.v, -1, self.p), self.p)


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """``Q`` or ``F<p>`` (e.g. ``F7``)."""
    s = text.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s[:1] in ("F", "f") and s[1:].isdigit():
        return GF(int(s[1:]))
    raise FieldError(f"unknown field {text!r}; expected Q or F<p>")


def format_scalar(c) -> str:
    return str(c)
