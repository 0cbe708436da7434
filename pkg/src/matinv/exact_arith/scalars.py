"""Exact scalar domains.

Two coefficient domains are supported:

* ``QQ`` -- the rationals, carried by :class:`gmpy2.mpq` (always in lowest
  terms with a positive denominator);
* ``PrimeField(p)`` -- residues modulo a prime, carried by :class:`FpElement`
  for point-level work and by plain ints in ``[0, p)`` inside polynomials.

Python ints coerce into either domain. Anything else mixing two moduli, or a
modulus with a rational, raises :class:`DomainMismatchError`.
"""
from __future__ import annotations

import random
from fractions import Fraction

import flint
from gmpy2 import mpq

from ..errors import DomainMismatchError, InvalidInputError

__all__ = [
    "QQ",
    "RationalField",
    "PrimeField",
    "FpElement",
    "random_prime",
    "domain_of",
    "to_rational",
]


def to_rational(value) -> mpq:
    """Convert ints, Fractions, ``"num/den"`` strings and mpq to mpq."""
    if isinstance(value, FpElement):
        raise DomainMismatchError("cannot convert a prime-field element to a rational")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return mpq(value.strip())
        except ValueError as exc:
            raise InvalidInputError(f"not a rational literal: {value!r}") from exc
    if isinstance(value, float):
        raise InvalidInputError("floats are not exact scalars")
    return mpq(value)


class RationalField:
    """The field of rational numbers."""

    name = "QQ"
    modulus = None

    def convert(self, value) -> mpq:
        return to_rational(value)

    def reduce(self, value):
        return value

    def inv(self, value):
        return 1 / value

    def element(self, raw):
        return raw

    def random_element(self, rng: random.Random, bound: int = 10**6, nonzero: bool = True):
        while True:
            v = mpq(rng.randint(-bound, bound), rng.randint(1, bound))
            if v or not nonzero:
                return v

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def __call__(self, value) -> mpq:
        return self.convert(value)


QQ = RationalField()


class PrimeField:
    """Integers modulo the prime ``p``.

    Primality is not re-checked on construction; use :func:`random_prime` to
    obtain moduli.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p < 2:
            raise InvalidInputError(f"invalid modulus {p}")
        self.p = int(p)

    @property
    def name(self):
        return f"GF({self.p})"

    @property
    def modulus(self):
        return self.p

    def convert(self, value) -> int:
        if isinstance(value, FpElement):
            if value.p != self.p:
                raise DomainMismatchError(f"modulus {value.p} != {self.p}")
            return value.v
        if isinstance(value, (mpq, Fraction)):
            if value.denominator != 1:
                raise DomainMismatchError("rational value in a prime-field context")
            return int(value.numerator) % self.p
        if isinstance(value, int):
            return value % self.p
        raise DomainMismatchError(f"cannot convert {type(value).__name__} to {self.name}")

    def reduce(self, value):
        return value % self.p

    def inv(self, value):
        if value % self.p == 0:
            raise ZeroDivisionError("inverse of zero in a prime field")
        return pow(value, -1, self.p)

    def element(self, raw) -> FpElement:
        return FpElement(raw, self.p)

    def random_element(self, rng: random.Random, nonzero: bool = True) -> FpElement:
        lo = 1 if nonzero else 0
        return FpElement(rng.randrange(lo, self.p), self.p)

    def __call__(self, value) -> FpElement:
        return FpElement(self.convert(value), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class FpElement:
    """Residue class modulo a prime, always reduced into ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _other(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise DomainMismatchError(f"modulus {other.p} != {self.p}")
            return other.v
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if isinstance(other, bool):
            return int(other)
        raise DomainMismatchError(
            f"cannot combine GF({self.p}) element with {type(other).__name__}"
        )

    def __add__(self, other):
        return FpElement(self.v + self._other(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.v - self._other(other), self.p)

    def __rsub__(self, other):
        return FpElement(self._other(other) - self.v, self.p)

    def __mul__(self, other):
        return FpElement(self.v * self._other(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other) % self.p
        if o == 0:
            raise ZeroDivisionError("division by zero in a prime field")
        return FpElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        if self.v == 0:
            raise ZeroDivisionError("division by zero in a prime field")
        return FpElement(self._other(other) * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return FpElement(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return FpElement(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElement({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


def domain_of(value):
    """Return the domain of an exact scalar (ints count as rationals)."""
    if isinstance(value, FpElement):
        return PrimeField(value.p)
    return QQ


def random_prime(rng: random.Random, bits: int = 61) -> int:
    """Uniformly random prime in ``[2**(bits-1), 2**bits)``.

    Moduli must satisfy ``2**60 <= p < 2**63`` so ``bits`` is limited to
    61..63.
    """
    if not 61 <= bits <= 63:
        raise InvalidInputError("prime bits must be in 61..63")
    lo, hi = 1 << (bits - 1), 1 << bits
    while True:
        cand = rng.randrange(lo, hi) | 1
        if flint.fmpz(cand).is_prime():
            return cand
