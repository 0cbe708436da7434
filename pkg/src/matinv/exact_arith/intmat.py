"""Square integer matrices and their characteristic polynomials."""
from __future__ import annotations

from typing import List, Sequence

from ..errors import InvalidInputError, InvalidSizeError
from .linalg import bareiss_det
from .scalars import QQ
from .upoly import UPoly

__all__ = ["IntMat", "charpoly"]


class IntMat:
    """Immutable square matrix of arbitrary-precision integers."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0:
            raise InvalidSizeError("IntMat needs dimension > 0")
        if any(len(r) != n for r in rows):
            raise InvalidInputError("IntMat must be square")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMat":
        return cls(list(zip(*cols)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> List[int]:
        return [r[j] for r in self.rows]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, IntMat) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"IntMat({self.tolist()})"

    def __matmul__(self, other):
        if isinstance(other, IntMat):
            cols = list(zip(*other.rows))
            return IntMat([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows])
        v = list(other)
        if len(v) != self.dim:
            raise InvalidInputError("vector length mismatch")
        return [sum(a * b for a, b in zip(r, v) if a) for r in self.rows]

    def __add__(self, other: "IntMat") -> "IntMat":
        return IntMat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "IntMat") -> "IntMat":
        return IntMat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c: int) -> "IntMat":
        return IntMat([[c * a for a in r] for r in self.rows])

    def __pow__(self, e: int) -> "IntMat":
        result = IntMat.identity(self.dim)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def det(self) -> int:
        return bareiss_det(self.rows)

    def charpoly(self) -> UPoly:
        return charpoly(self)

    def submatrix(self, idx: Sequence[int]) -> "IntMat":
        return IntMat([[self.rows[i][j] for j in idx] for i in idx])


def charpoly(m: IntMat) -> UPoly:
    """``det(lambda*I - m)`` by Berkowitz's division-free algorithm.

    Everything stays in the integers. Matrix-vector products use the sparse
    row structure, which matters for the Picard matrices (a few percent
    nonzero). Result is a monic UPoly over QQ with integral coefficients,
    constant term first.
    """
    n = m.dim
    # sparse rows: row i -> [(j, a_ij)], sorted by column
    sparse = [[(j, a) for j, a in enumerate(r) if a] for r in m.rows]
    vect = [1]  # coefficients of the running charpoly, highest degree first
    for k in range(n):
        a_kk = m.rows[k][k]
        row_k = [(j, a) for j, a in sparse[k] if j < k]
        col = [m.rows[i][k] for i in range(k)]
        # leading k x k block, restricted sparse rows
        sub = [[(j, a) for j, a in sparse[i] if j < k] for i in range(k)]
        toeplitz = [1, -a_kk]
        v = col
        for _ in range(k):
            toeplitz.append(-sum(a * v[j] for j, a in row_k))
            v = [sum(a * v[j] for j, a in r) for r in sub]
        vect = [
            sum(toeplitz[i - j] * vect[j] for j in range(min(i, len(vect) - 1) + 1))
            for i in range(k + 2)
        ]
    return UPoly(list(reversed(vect)), QQ)
