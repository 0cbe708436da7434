"""Dense univariate polynomials over QQ or a prime field."""
from __future__ import annotations

import math
from typing import Iterable, Sequence

from gmpy2 import mpq

from ..errors import DegenerateInputError, DomainMismatchError, InexactDivisionError
from .scalars import QQ, FpElement, PrimeField

__all__ = [
    "UPoly",
    "INFINITE_VALUATION",
    "upoly_gcd",
    "tuple_content_reduce",
]

#: valuation of the zero polynomial
INFINITE_VALUATION = math.inf

# below this length schoolbook multiplication beats Kronecker packing
_KRONECKER_CUTOFF = 40


def _strip(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


class UPoly:
    """Polynomial ``c[0] + c[1]*t + ... + c[n]*t**n``.

    Coefficients are stored constant term first, trailing zeros stripped, so
    the zero polynomial has an empty list and degree -1. Over ``QQ`` the raw
    coefficients are :class:`gmpy2.mpq`; over a prime field they are ints in
    ``[0, p)``.

    >>> t = UPoly.gen()
    >>> (t**2 - 1).gcd(t - 1)
    UPoly([-1, 1], QQ)
    """

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs: Iterable = (), domain=QQ):
        self.domain = domain
        self.coeffs = _strip([domain.convert(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: list, domain) -> "UPoly":
        obj = cls.__new__(cls)
        obj.domain = domain
        obj.coeffs = _strip(coeffs)
        return obj

    @classmethod
    def gen(cls, domain=QQ) -> "UPoly":
        return cls._raw([domain.convert(0), domain.convert(1)], domain)

    @classmethod
    def constant(cls, c, domain=QQ) -> "UPoly":
        return cls([c], domain)

    @classmethod
    def zero(cls, domain=QQ) -> "UPoly":
        return cls._raw([], domain)

    # -- queries -----------------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def valuation(self):
        """Index of the first nonzero coefficient (``inf`` for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INFINITE_VALUATION

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self):
        if not self.coeffs:
            raise DegenerateInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int):
        """i-th coefficient as an exact scalar."""
        raw = self.coeffs[i] if 0 <= i < len(self.coeffs) else 0
        if isinstance(self.domain, PrimeField):
            return FpElement(raw, self.domain.p)
        return mpq(raw)

    def __call__(self, x):
        if isinstance(self.domain, PrimeField):
            p = self.domain.p
            xv = self.domain.convert(x)
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * xv + c) % p
            return FpElement(acc, p)
        acc = mpq(0)
        x = self.domain.convert(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.domain == other.domain and self.coeffs == other.coeffs
        if isinstance(other, (int, mpq, FpElement)):
            return self == UPoly([other], self.domain)
        return NotImplemented

    def __hash__(self):
        return hash((tuple(self.coeffs), self.domain))

    def __repr__(self):
        shown = [int(c) if isinstance(c, mpq) and c.denominator == 1 else c for c in self.coeffs]
        return f"UPoly({shown}, {self.domain!r})"

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            if other.domain != self.domain:
                raise DomainMismatchError(f"{self.domain!r} vs {other.domain!r}")
            return other
        return UPoly([other], self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        if self.domain.modulus:
            p = self.domain.modulus
            out = [c % p for c in out]
        return UPoly._raw(out, self.domain)

    __radd__ = __add__

    def __neg__(self):
        if self.domain.modulus:
            p = self.domain.modulus
            return UPoly._raw([(-c) % p for c in self.coeffs], self.domain)
        return UPoly._raw([-c for c in self.coeffs], self.domain)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "UPoly":
        c = self.domain.convert(c)
        if self.domain.modulus:
            p = self.domain.modulus
            return UPoly._raw([(x * c) % p for x in self.coeffs], self.domain)
        return UPoly._raw([x * c for x in self.coeffs], self.domain)

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly._raw([], self.domain)
        p = self.domain.modulus
        if p and min(len(a), len(b)) > _KRONECKER_CUTOFF:
            return UPoly._raw(_kronecker_mulmod(a, b, p), self.domain)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        if p:
            out = [c % p for c in out]
        return UPoly._raw(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = UPoly._raw([self.domain.convert(1)], self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "UPoly":
        """Multiply by ``t**k``."""
        if not self.coeffs:
            return self
        return UPoly._raw([0] * k + list(self.coeffs), self.domain)

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        dom = self.domain
        p = dom.modulus
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv_lc = dom.inv(other.coeffs[-1])
        b = other.coeffs
        if len(rem) - 1 < db:
            return UPoly._raw([], dom), UPoly._raw(rem, dom)
        quot = [0] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if p:
                c %= p
            if not c:
                continue
            c = c * inv_lc
            if p:
                c %= p
            quot[k] = c
            for j in range(db + 1):
                rem[k + j] -= c * b[j]
        rem = rem[:db]
        if p:
            rem = [c % p for c in rem]
        return UPoly._raw(quot, dom), UPoly._raw(rem, dom)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divexact(self, other) -> "UPoly":
        q, r = divmod(self, other)
        if r.coeffs:
            raise InexactDivisionError("nonzero remainder in exact division")
        return q

    def monic(self) -> "UPoly":
        if not self.coeffs:
            return self
        return self.scale(self.domain.inv(self.coeffs[-1]))

    def derivative(self) -> "UPoly":
        out = [i * c for i, c in enumerate(self.coeffs)][1:]
        if self.domain.modulus:
            out = [c % self.domain.modulus for c in out]
        return UPoly._raw(out, self.domain)

    def gcd(self, other) -> "UPoly":
        return upoly_gcd(self, other)

    def is_integral(self) -> bool:
        return self.domain == QQ and all(c.denominator == 1 for c in self.coeffs)

    def int_coeffs(self) -> list:
        if not self.is_integral():
            raise DomainMismatchError("polynomial has non-integral coefficients")
        return [int(c) for c in self.coeffs]

    def reverse(self) -> "UPoly":
        """Coefficient reversal ``t**deg * f(1/t)``."""
        return UPoly._raw(list(reversed(self.coeffs)), self.domain)


def _kronecker_mulmod(a: Sequence[int], b: Sequence[int], p: int) -> list:
    """Multiply coefficient lists mod p by packing them into big integers."""
    slot = 2 * p.bit_length() + min(len(a), len(b)).bit_length() + 1
    slot = (slot + 7) // 8 * 8
    nbytes = slot // 8

    def pack(c):
        return int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in c), "little")

    prod = pack(a) * pack(b)
    n = len(a) + len(b) - 1
    raw = prod.to_bytes(n * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") % p for i in range(n)]


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    """Monic greatest common divisor; ``gcd(a, 0)`` is ``monic(a)``."""
    if not isinstance(a, UPoly) or not isinstance(b, UPoly):
        raise TypeError("upoly_gcd expects UPoly arguments")
    if a.domain != b.domain:
        raise DomainMismatchError(f"{a.domain!r} vs {b.domain!r}")
    while b.coeffs:
        a, b = b, (a % b).monic()
    return a.monic()


def tuple_content_reduce(polys: Sequence):
    """Divide a tuple of polynomials by their common gcd.

    Works for :class:`UPoly` and for any polynomial type exposing ``gcd``,
    ``degree``, ``is_zero`` and ``divmod`` (e.g. ``flint.nmod_poly``).

    Returns ``(reduced, removed_degree)``.
    """
    polys = list(polys)
    if all(p.is_zero() for p in polys):
        raise DegenerateInputError("content of an all-zero tuple")
    g = None
    # cheapest first: small polynomials shrink the running gcd fastest
    for f in sorted((p for p in polys if not p.is_zero()), key=lambda f: f.degree()):
        g = f if g is None else g.gcd(f)
        if g.degree() == 0:
            break
    if g.degree() == 0:
        return polys, 0
    out = []
    for f in polys:
        q, r = divmod(f, g)
        if not r.is_zero():
            raise InexactDivisionError("tuple content does not divide an entry")
        out.append(q)
    return out, g.degree()
