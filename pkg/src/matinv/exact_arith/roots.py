"""Certified real-root isolation and root-modulus bounds over QQ.

Intervals have rational endpoints. ``isolate_max_real_root`` certifies its
answer with a Sturm count of exactly one root in ``(lo, hi]`` (or returns a
degenerate ``[r, r]`` when it lands on an exact rational root).

``max_root_modulus`` reduces the complex problem to a real one: if
``z_1..z_n`` are the roots of a squarefree ``S``, the polynomial

    R(y) = Res_x(S(x), x**n * S(y/x))

has the roots ``z_i * z_j``. Every one of them has modulus at most ``M**2``
(``M`` the largest root modulus) and ``M**2 = z * conj(z)`` is itself a root,
so ``M**2`` is the largest real root of ``R``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import List, Optional

from gmpy2 import mpq

from ..errors import DegenerateInputError, DomainMismatchError
from .linalg import bareiss_det
from .scalars import QQ, to_rational
from .upoly import UPoly

__all__ = [
    "RealInterval",
    "sturm_sequence",
    "count_real_roots",
    "squarefree_part",
    "isolate_max_real_root",
    "max_root_modulus",
    "modulus_polynomial",
]


@dataclass(frozen=True)
class RealInterval:
    lo: mpq
    hi: mpq

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = to_rational(x)
        return self.lo <= x <= self.hi

    def overlaps(self, other: "RealInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.midpoint)

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi), "approx": float(self.midpoint)}


def _as_qq(p: UPoly) -> UPoly:
    if p.domain != QQ:
        raise DomainMismatchError("root isolation needs a polynomial over QQ")
    if p.is_zero():
        raise DegenerateInputError("root isolation of the zero polynomial")
    return p


def squarefree_part(p: UPoly) -> UPoly:
    """Monic squarefree part ``p / gcd(p, p')``."""
    g = p.gcd(p.derivative())
    return (p // g).monic()


def sturm_sequence(p: UPoly) -> List[UPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: List[UPoly], x) -> int:
    signs = []
    for f in seq:
        v = f(x)
        if v:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(seq: List[UPoly], a, b) -> int:
    """Number of distinct real roots in ``(a, b]`` from a Sturm sequence."""
    return _variations(seq, a) - _variations(seq, b)


def _cauchy_bound(p: UPoly) -> mpq:
    lc = abs(p.coeffs[-1])
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lc if p.degree() > 0 else mpq(1)


def isolate_max_real_root(p: UPoly, precision) -> Optional[RealInterval]:
    """Interval of width <= precision around the largest real root of ``p``.

    Returns ``None`` when ``p`` has no real root.
    """
    p = _as_qq(p)
    precision = to_rational(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    if p.degree() == 0:
        return None
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)
    bound = _cauchy_bound(sq)
    lo, hi = -bound, bound
    if count_real_roots(seq, lo, hi) == 0:
        return None
    # invariant: the largest root lies in (lo, hi] and nothing lies above hi
    while True:
        if sq(hi) == 0 and hi - lo <= precision:
            return RealInterval(hi, hi)
        if hi - lo <= precision and count_real_roots(seq, lo, hi) == 1:
            r = _simplest_between(lo, hi)
            if r > lo and sq(r) == 0:
                return RealInterval(r, r)
            return RealInterval(lo, hi)
        mid = (lo + hi) / 2
        if count_real_roots(seq, mid, hi) >= 1:
            lo = mid
        else:
            if sq(mid) == 0:
                return RealInterval(mid, mid)
            hi = mid


def _simplest_between(lo: mpq, hi: mpq) -> mpq:
    """Rational with the smallest denominator in ``[lo, hi]`` (Stern-Brocot)."""
    if lo <= 0 <= hi:
        return mpq(0)
    if hi < 0:
        return -_simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if fl == lo or fl + 1 <= hi:
        return mpq(fl if fl == lo else fl + 1)
    # lo and hi share the integer part fl; recurse on reciprocals of the fractional parts
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _primitive_int(p: UPoly) -> List[int]:
    from math import gcd, lcm

    den = 1
    for c in p.coeffs:
        den = lcm(den, int(c.denominator))
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _sylvester(f: List[int], g: List[int]) -> List[List[int]]:
    # f, g constant term first
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for k, c in enumerate(reversed(f)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for k, c in enumerate(reversed(g)):
            row[i + k] = c
        rows.append(row)
    return rows


def _interpolate(xs: List[int], ys: List[int]) -> UPoly:
    """Newton interpolation over QQ."""
    n = len(xs)
    coef = [mpq(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = UPoly([coef[-1]], QQ)
    for i in range(n - 2, -1, -1):
        poly = poly * UPoly([-xs[i], 1], QQ) + UPoly([coef[i]], QQ)
    return poly


def modulus_polynomial(p: UPoly) -> UPoly:
    """``R(y) = Res_x(S(x), x**n S(y/x))`` for the squarefree part S of p.

    ``p`` must not vanish at 0. Computed by evaluating the integer Sylvester
    determinant at ``n**2 + 1`` points and interpolating.
    """
    s = _primitive_int(squarefree_part(_as_qq(p)))
    n = len(s) - 1
    if s[0] == 0:
        raise DegenerateInputError("modulus polynomial needs p(0) != 0")
    if n == 0:
        return UPoly([1], QQ)
    xs = list(range(n * n + 1))
    ys = []
    for y in xs:
        # x**n S(y/x) = sum_k s_k y**k x**(n-k); coefficient of x**m is s_{n-m} y**(n-m)
        g = [s[n - m] * y ** (n - m) for m in range(n + 1)]
        ys.append(bareiss_det(_sylvester(s, g)))
    return _interpolate(xs, ys)


def _sqrt_interval(iv: RealInterval, k: int) -> RealInterval:
    """Rational interval containing ``sqrt`` of every point of iv (iv >= 0)."""
    scale = 1 << k
    lo = max(iv.lo, mpq(0))
    lo_num = (int(lo.numerator) * scale * scale) // int(lo.denominator)
    hi_num = -((-int(iv.hi.numerator) * scale * scale) // int(iv.hi.denominator))
    s_lo = isqrt(lo_num)
    s_hi = isqrt(hi_num)
    if s_hi * s_hi < hi_num:
        s_hi += 1
    return RealInterval(mpq(s_lo, scale), mpq(s_hi, scale))


def _exact_sqrt(x: mpq) -> Optional[mpq]:
    if x < 0:
        return None
    n, d = int(x.numerator), int(x.denominator)
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return mpq(rn, rd)
    return None


def max_root_modulus(p: UPoly, precision) -> Optional[RealInterval]:
    """Interval containing the largest modulus over all complex roots of p.

    Returns ``None`` for a nonzero constant (no roots at all).
    """
    p = _as_qq(p)
    precision = to_rational(precision)
    if p.degree() == 0:
        return None
    v = p.valuation()
    core = UPoly._raw(list(p.coeffs[v:]), QQ)
    if core.degree() == 0:
        return RealInterval(mpq(0), mpq(0))
    r = modulus_polynomial(core)
    prec = precision
    k = max(8, 2 * int(1 / precision).bit_length() + 8)
    while True:
        sq = isolate_max_real_root(r, prec)
        if sq.lo == sq.hi:
            exact = _exact_sqrt(sq.lo)
            if exact is not None:
                return RealInterval(exact, exact)
        out = _sqrt_interval(sq, k)
        if out.width <= precision:
            return out
        prec /= 16
        k += 4
