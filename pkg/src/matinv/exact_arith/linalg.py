"""Exact matrix algebra over arbitrary commutative rings.

Matrices are lists of rows. The routines here are generic: entries may be
ints, mpq, FpElement, UPoly, ``flint.nmod_poly`` or MPoly, as long as they
support ``+``, ``-`` and ``*`` (and exact division where noted).
"""
from __future__ import annotations

from typing import List, Sequence

from gmpy2 import mpq

from ..errors import InexactDivisionError, InvalidInputError

__all__ = [
    "det_expand",
    "row_cofactors",
    "adjugate",
    "bareiss_det",
    "rank",
    "inverse",
    "matmul",
    "divexact",
]


def _field(x):
    # plain ints would turn into floats under "/"
    return mpq(x) if isinstance(x, int) else x


def divexact(a, b):
    """Exact quotient for polynomial-like ring elements."""
    q, r = divmod(a, b)
    if r:
        raise InexactDivisionError("nonzero remainder in exact division")
    return q


def _subset_minors(m: Sequence[Sequence], rows: Sequence[int], ncols: int):
    """Determinants of ``m[rows][:, S]`` for every column set S of size len(rows).

    Laplace expansion along the listed rows, sharing sub-minors across
    column subsets (bitmask DP). Division-free, so it works over any
    commutative ring. Cost is about ``len(rows) * 2**ncols`` products.
    """
    layer = {0: None}  # mask -> minor using the first k rows; None = empty product
    for r in rows:
        nxt = {}
        for mask, val in layer.items():
            # sign of inserting column c = number of used columns greater than c
            for c in range(ncols):
                bit = 1 << c
                if mask & bit:
                    continue
                higher = bin(mask >> (c + 1)).count("1")
                entry = m[r][c]
                term = entry if val is None else val * entry
                if higher & 1:
                    term = -term
                nmask = mask | bit
                if nmask in nxt:
                    nxt[nmask] = nxt[nmask] + term
                else:
                    nxt[nmask] = term
        layer = nxt
    return layer


def det_expand(m: Sequence[Sequence]):
    """Division-free determinant of a small square matrix."""
    n = len(m)
    if n == 0:
        raise InvalidInputError("empty matrix")
    return _subset_minors(m, range(n), n)[(1 << n) - 1]


def row_cofactors(m: Sequence[Sequence], i: int) -> list:
    """Cofactors ``C[i][j] = (-1)**(i+j) det(m without row i, column j)``."""
    n = len(m)
    full = (1 << n) - 1
    rows = [r for r in range(n) if r != i]
    if not rows:
        return [1]
    minors = _subset_minors(m, rows, n)
    out = []
    for j in range(n):
        # minor over columns != j, expanded with columns in increasing order
        val = minors[full & ~(1 << j)]
        out.append(-val if (i + j) & 1 else val)
    return out


def adjugate(m: Sequence[Sequence]) -> List[list]:
    """``adj(m)[i][j] = C[j][i]``, so ``adj(m) @ m = det(m) * I``."""
    n = len(m)
    cof = [row_cofactors(m, i) for i in range(n)]
    return [[cof[j][i] for j in range(n)] for i in range(n)]


def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer (or integral-domain) matrix."""
    a = [list(row) for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0 * prev
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) else num / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: Sequence[Sequence]) -> int:
    """Rank over a field by fraction-free elimination.

    Entries must be field elements (mpq, FpElement) or ints treated as
    rationals.
    """
    a = [[_field(x) for x in row] for row in m]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                a[i][j] = (a[i][j] * a[r][c] - a[i][c] * a[r][j]) / prev
            a[i][c] = a[i][c] * 0
        prev = a[r][c]
        r += 1
        if r == nrows:
            break
    return r


def inverse(m: Sequence[Sequence]):
    """Gauss-Jordan inverse over a field; raises ZeroDivisionError if singular."""
    n = len(m)
    a = [
        [_field(x) for x in row] + [_field(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(m)
    ]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[list]:
    nb = len(b)
    cols = list(zip(*b))
    out = []
    for row in a:
        if len(row) != nb:
            raise InvalidInputError("shape mismatch in matmul")
        out.append([_dot(row, col) for col in cols])
    return out


def _dot(u, v):
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc
