"""Sparse multivariate polynomials with integer coefficients."""
from __future__ import annotations

from typing import Dict, Iterable, Sequence, Tuple

from ..errors import DomainMismatchError, InexactDivisionError

__all__ = ["MPoly"]

Exponent = Tuple[int, ...]


class MPoly:
    """Polynomial in ``nvars`` variables stored as ``{exponent: coeff}``.

    Zero coefficients are never stored. Coefficients are Python ints.
    Variables are addressed by position; callers decide the naming (for
    the matrix maps, variable ``i*q + j`` is the entry ``x[i][j]``).
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, nvars: int, k: int) -> "MPoly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars: int, c: int) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], c: int = 1) -> "MPoly":
        return cls(nvars, {tuple(exps): c})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def min_exponent(self, k: int) -> int:
        """Largest power of variable ``k`` dividing the polynomial."""
        return min((e[k] for e in self.terms), default=0)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, int):
            return self == MPoly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "MPoly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{k}" if d == 1 else f"x{k}^{d}" for k, d in enumerate(e) if d
            )
            parts.append(f"{c}*{mono}" if mono else str(c))
        return "MPoly(" + " + ".join(parts) + ")"

    # -- arithmetic --------------------------------------------------------

    def _check(self, other) -> "MPoly":
        if isinstance(other, int):
            return MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly) or other.nvars != self.nvars:
            raise DomainMismatchError("MPoly operands over different variable sets")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return MPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        out: Dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def _leading(self):
        e = max(self.terms)
        return e, self.terms[e]

    def divexact(self, other: "MPoly") -> "MPoly":
        """Exact quotient under lex order; raises if a remainder appears."""
        other = self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (eb, cb), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                d = tuple(a - b for a, b in zip(e, eb))
                if min(d) < 0 or c % cb:
                    raise InexactDivisionError("monomial does not divide a term")
                out[d] = c // cb
            return MPoly(self.nvars, out)
        rem = MPoly(self.nvars, self.terms)
        eb, cb = other._leading()
        quot: Dict[Exponent, int] = {}
        while rem.terms:
            er, cr = rem._leading()
            d = tuple(a - b for a, b in zip(er, eb))
            if min(d) < 0 or cr % cb:
                raise InexactDivisionError("nonzero remainder in multivariate division")
            step = MPoly(self.nvars, {d: cr // cb})
            quot[d] = cr // cb
            rem = rem - step * other
        return MPoly(self.nvars, quot)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, values: Sequence, one=1):
        """Substitute ``values[k]`` for variable ``k``.

        ``values`` may hold any ring elements (scalars, UPolys, MPolys in
        other variables); ``one`` is the multiplicative identity used for
        the empty product.
        """
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        powers: Dict[Tuple[int, int], object] = {}

        def power(k, d):
            key = (k, d)
            if key not in powers:
                powers[key] = values[k] if d == 1 else power(k, d - 1) * values[k]
            return powers[key]

        total = None
        for e, c in self.terms.items():
            term = None
            for k, d in enumerate(e):
                if d:
                    term = power(k, d) if term is None else term * power(k, d)
            term = one * c if term is None else term * c
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def compose(self, polys: Sequence["MPoly"]) -> "MPoly":
        if not polys:
            raise ValueError("compose needs substitution polynomials")
        nv = polys[0].nvars
        return self.evaluate(list(polys), one=MPoly.const(nv, 1))

    @staticmethod
    def product(nvars: int, factors: Iterable["MPoly"]) -> "MPoly":
        out = MPoly.const(nvars, 1)
        for f in factors:
            out = out * f
        return out
