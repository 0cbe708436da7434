"""The maps I (matrix inverse), J (Hadamard inverse) and K = I o J.

Each map is represented on ``P(M_q)`` by a tuple of homogeneous polynomials
in the ``q**2`` entries ``x[i][j]`` (variable index ``i*q + j``, zero-based):

* ``Ihat[i][j] = (-1)**(i+j) det(x with row j and column i removed)``,
  degree ``q-1`` (the adjugate);
* ``Jhat[i][j] = product of all entries except x[i][j]``, degree ``q**2-1``;
* ``Khat[i][j] = Pi(x) * C[j][i](1/x)``, degree ``q**2-q+1``, obtained from
  ``Ihat o Jhat`` by exact division by ``Pi(x)**(q-2)``.

The same construction is available for matrices whose entries are
univariate polynomials (:func:`khat_poly`), which is what the degree probe
and the chart checks run on.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .errors import InexactDivisionError, InvalidInputError, InvalidSizeError
from .exact_arith import MPoly, QQ, adjugate, det_expand, domain_of, rank
from .exact_arith.linalg import divexact

__all__ = [
    "ProjPoint",
    "ProjMapRep",
    "INDETERMINATE",
    "build_Ihat",
    "build_Jhat",
    "build_Khat",
    "compose_IJ",
    "eval_map",
    "ihat_at",
    "jhat_at",
    "khat_at",
    "jhat_poly",
    "khat_poly",
    "pfunc_poly",
    "rank",
    "outer",
    "chi_scale",
    "permute",
    "projectively_equal",
]


class _Indeterminate:
    """Result of evaluating a map where all its components vanish."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INDETERMINATE"

    def __bool__(self):
        return False


INDETERMINATE = _Indeterminate()


def projectively_equal(a: Sequence, b: Sequence) -> bool:
    """True iff a and b are nonzero and proportional."""
    if len(a) != len(b):
        return False
    k = next((i for i, x in enumerate(a) if x), None)
    if k is None or not b[k]:
        return False
    return all(x * b[k] == y * a[k] for x, y in zip(a, b))


class ProjPoint:
    """Point of ``P(M_q)`` given by a q x q matrix of exact scalars.

    Equality is projective.
    """

    __slots__ = ("q", "coords")

    def __init__(self, matrix: Sequence[Sequence]):
        q = len(matrix)
        if q < 1 or any(len(r) != q for r in matrix):
            raise InvalidInputError("ProjPoint needs a square matrix")
        coords = tuple(x for r in matrix for x in r)
        if not any(coords):
            raise InvalidInputError("the zero matrix is not a projective point")
        dom = domain_of(coords[0])
        if dom == QQ:
            coords = tuple(QQ(x) for x in coords)
        else:
            coords = tuple(dom(x) for x in coords)
        self.q = q
        self.coords = coords

    @classmethod
    def from_flat(cls, q: int, coords: Sequence) -> "ProjPoint":
        return cls([list(coords[i * q:(i + 1) * q]) for i in range(q)])

    @property
    def domain(self):
        return domain_of(self.coords[0])

    def matrix(self) -> List[list]:
        q = self.q
        return [list(self.coords[i * q:(i + 1) * q]) for i in range(q)]

    def __getitem__(self, ij):
        i, j = ij
        return self.coords[i * self.q + j]

    def normalized(self, i: Optional[int] = None, j: Optional[int] = None) -> "ProjPoint":
        """Representative with the given entry (default: first nonzero) equal to 1."""
        if i is None:
            k = next(k for k, x in enumerate(self.coords) if x)
        else:
            k = i * self.q + j
        c = self.coords[k]
        if not c:
            raise ZeroDivisionError("normalizing entry is zero")
        return ProjPoint.from_flat(self.q, [x / c for x in self.coords])

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.q == other.q and projectively_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.normalized().coords)

    def __repr__(self):
        return f"ProjPoint({[[str(x) for x in r] for r in self.matrix()]})"


@dataclass(frozen=True)
class ProjMapRep:
    """Homogeneous polynomial representative of a rational self-map of P(M_q)."""

    q: int
    components: Tuple[MPoly, ...]
    label: str

    @property
    def degree(self) -> int:
        return next(c.total_degree() for c in self.components if c)

    def component(self, i: int, j: int) -> MPoly:
        return self.components[i * self.q + j]

    def is_homogeneous(self) -> bool:
        degs = {c.total_degree() for c in self.components if c}
        return len(degs) == 1 and all(c.is_homogeneous() for c in self.components)


def _check_q(q: int):
    if not isinstance(q, int) or q < 2:
        raise InvalidSizeError(f"matrix size must be an integer >= 2, got {q!r}")


def _variables(q: int) -> List[List[MPoly]]:
    n = q * q
    return [[MPoly.var(n, i * q + j) for j in range(q)] for i in range(q)]


def _pi_monomial(q: int, power: int = 1) -> MPoly:
    return MPoly.monomial(q * q, [power] * (q * q))


@lru_cache(maxsize=None)
def build_Ihat(q: int) -> ProjMapRep:
    _check_q(q)
    adj = adjugate(_variables(q))
    return ProjMapRep(q, tuple(c for row in adj for c in row), "I-hat")


@lru_cache(maxsize=None)
def build_Jhat(q: int) -> ProjMapRep:
    _check_q(q)
    n = q * q
    comps = []
    for k in range(n):
        e = [1] * n
        e[k] = 0
        comps.append(MPoly.monomial(n, e))
    return ProjMapRep(q, tuple(comps), "J-hat")


@lru_cache(maxsize=None)
def compose_IJ(q: int) -> ProjMapRep:
    """``Ihat o Jhat`` without removing the common factor."""
    jhat = build_Jhat(q).components
    comps = tuple(c.compose(jhat) for c in build_Ihat(q).components)
    return ProjMapRep(q, comps, "I-hat o J-hat")


@lru_cache(maxsize=None)
def build_Khat(q: int) -> ProjMapRep:
    """Reduced representative of K = I o J.

    Built as ``Ihat o Jhat`` divided exactly by ``Pi**(q-2)``; a nonzero
    remainder would mean a bug and raises InexactDivisionError.
    """
    _check_q(q)
    common = _pi_monomial(q, q - 2)
    comps = []
    for c in compose_IJ(q).components:
        try:
            comps.append(c.divexact(common))
        except InexactDivisionError as exc:
            raise InexactDivisionError(
                f"Ihat o Jhat not divisible by Pi^{q - 2} (q={q})"
            ) from exc
    return ProjMapRep(q, tuple(comps), "K-hat")


def _one_like(x):
    return x * 0 + 1


def eval_map(f: ProjMapRep, x: ProjPoint):
    """Evaluate f at x; returns INDETERMINATE if every component vanishes."""
    if f.q != x.q:
        raise InvalidInputError("map and point have different sizes")
    one = _one_like(x.coords[0])
    vals = [c.evaluate(x.coords, one=one) for c in f.components]
    if not any(vals):
        return INDETERMINATE
    return ProjPoint.from_flat(f.q, vals)


# -- pointwise formulas (no symbolic expansion) ------------------------------


def ihat_at(m: Sequence[Sequence]) -> List[list]:
    """Cofactor map at a matrix: the adjugate."""
    return adjugate(m)


def jhat_at(m: Sequence[Sequence]) -> List[list]:
    flat = [x for r in m for x in r]
    q = len(m)
    vals = _products_except(flat)
    return [vals[i * q:(i + 1) * q] for i in range(q)]


def khat_at(m: Sequence[Sequence]) -> List[list]:
    """Khat at a matrix of scalars.

    Uses ``Pi(x) * adj(1/x)`` when every entry is nonzero, and the expanded
    polynomial representative otherwise.
    """
    q = len(m)
    flat = [x for r in m for x in r]
    if all(flat):
        pi = flat[0]
        for x in flat[1:]:
            pi = pi * x
        recip = [[1 / x for x in r] for r in m]
        return [[pi * c for c in r] for r in adjugate(recip)]
    one = _one_like(flat[0])
    vals = [c.evaluate(flat, one=one) for c in build_Khat(q).components]
    return [vals[i * q:(i + 1) * q] for i in range(q)]


# -- polynomial-matrix versions ------------------------------------------------


def _products_except(flat: Sequence):
    """All products of the list with one factor left out, plus nothing else.

    Prefix/suffix products; no division.
    """
    n = len(flat)
    prefix = [None] * (n + 1)
    for k, x in enumerate(flat):
        prefix[k + 1] = x if prefix[k] is None else prefix[k] * x
    out = [None] * n
    suffix = None
    for k in range(n - 1, -1, -1):
        if prefix[k] is None:
            out[k] = suffix if suffix is not None else _one_like(flat[k])
        elif suffix is None:
            out[k] = prefix[k]
        else:
            out[k] = prefix[k] * suffix
        suffix = flat[k] if suffix is None else flat[k] * suffix
    return out


def jhat_poly(entries: Sequence[Sequence]):
    """``(Jhat matrix, Pi)`` for a matrix of polynomial-like ring elements."""
    q = len(entries)
    flat = [x for r in entries for x in r]
    jh = _products_except(flat)
    pi = jh[0] * flat[0]
    return [jh[i * q:(i + 1) * q] for i in range(q)], pi


def khat_poly(entries: Sequence[Sequence]) -> list:
    """Khat applied to a matrix of polynomials, row-major list of q**2 entries.

    Route: Jhat by prefix/suffix products, then signed (q-1)-minors, then
    exact division by ``Pi**(q-2)``.
    """
    q = len(entries)
    jh, pi = jhat_poly(entries)
    adj = adjugate(jh)
    flat = [c for r in adj for c in r]
    if q == 2:
        return flat
    common = pi ** (q - 2)
    return [divexact(c, common) for c in flat]


def pfunc_poly(entries: Sequence[Sequence]):
    """``P(x) = Pi(x) det(1/x)``, computed as ``det(Jhat) / Pi**(q-1)``."""
    q = len(entries)
    jh, pi = jhat_poly(entries)
    return divexact(det_expand(jh), pi ** (q - 1))


# -- symmetries and helpers ------------------------------------------------------


def outer(lam: Sequence, nu: Sequence) -> List[list]:
    if len(lam) != len(nu):
        raise InvalidInputError("outer product of vectors of different lengths")
    if not any(lam) or not any(nu):
        raise InvalidInputError("outer product with a zero vector")
    return [[a * b for b in nu] for a in lam]


def chi_scale(x: ProjPoint, t, index: int = 0) -> ProjPoint:
    """Multiply row ``index`` by t, then column ``index`` by t."""
    if not t:
        raise InvalidInputError("chi_scale needs t != 0")
    m = x.matrix()
    q = x.q
    if not 0 <= index < q:
        raise InvalidInputError("index out of range")
    m[index] = [v * t for v in m[index]]
    for r in m:
        r[index] = r[index] * t
    return ProjPoint(m)


def permute(x: ProjPoint, kind: str, l: int, m: int) -> ProjPoint:
    """``kind='row'`` swaps rows l and m (rho); ``kind='col'`` swaps columns (gamma)."""
    q = x.q
    if not (0 <= l < q and 0 <= m < q):
        raise InvalidInputError("swap index out of range")
    mat = x.matrix()
    if kind == "row":
        mat[l], mat[m] = mat[m], mat[l]
    elif kind == "col":
        for r in mat:
            r[l], r[m] = r[m], r[l]
    else:
        raise InvalidInputError(f"unknown permutation kind {kind!r}")
    return ProjPoint(mat)
