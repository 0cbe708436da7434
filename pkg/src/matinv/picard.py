"""Pullback action of K on the Picard group of the blowup space.

Basis ordering (dimension ``2*q**2 + 2``), zero-based indices ``i, j``::

    0                 H
    1                 R1
    2 + i*q + j       A[i][j]
    2 + q*q + i*q + j B[i][j]

The pullback matrix has the images of the basis vectors as its columns::

    K*H     = (q^2-q+1) H - (q-2) R1 - (2q-3) sum A  -/+ (2q-2) sum B
    K*R1    = (q^2-q)   H - (q-1) R1 - (2q-3) sum A  -/+ (2q-2) sum B
    K*A[i][j] = Sigma(j, i)
    K*B[i][j] = A[j][i] + B[j][i]

with ``Sigma(i, j) = H - B[i][j] - sum over T(i, j) of (A + B)`` and
``T(i, j) = {(a, b): a == i or b == j}``. The sign in front of ``sum B`` in
the first two columns is selected by :class:`SignConvention`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .degree_engine import DegreeRecord
from .errors import InvalidInputError, InvalidSizeError
from .exact_arith import QQ, IntMat, RealInterval, UPoly, max_root_modulus
from .exact_arith.linalg import inverse, matmul, rank

__all__ = [
    "SignConvention",
    "PicBasis",
    "t_set",
    "sigma_class",
    "jr_class",
    "pullback_matrix",
    "s1_restriction",
    "predicted_degrees",
    "p_factor",
    "q_factor",
    "charpoly_factor_check",
    "FactorReport",
    "invariant_subspace_check",
    "delta",
    "DeltaResult",
    "transpose_symmetry_check",
]


class SignConvention(str, enum.Enum):
    ALL_NEGATIVE = "all-negative"
    PAPER_LITERAL = "paper-literal"


class PicBasis:
    """Index map over {H, R1, A[i][j], B[i][j]}."""

    def __init__(self, q: int):
        if q < 2:
            raise InvalidSizeError("q must be >= 2")
        self.q = q
        self.dim = 2 * q * q + 2

    H = 0
    R = 1

    def A(self, i: int, j: int) -> int:
        self._check(i, j)
        return 2 + i * self.q + j

    def B(self, i: int, j: int) -> int:
        self._check(i, j)
        return 2 + self.q * self.q + i * self.q + j

    def _check(self, i, j):
        if not (0 <= i < self.q and 0 <= j < self.q):
            raise InvalidInputError(f"index ({i}, {j}) out of range for q={self.q}")

    def labels(self) -> List[str]:
        q = self.q
        out = ["H", "R1"]
        out += [f"A{i + 1}{j + 1}" for i in range(q) for j in range(q)]
        out += [f"B{i + 1}{j + 1}" for i in range(q) for j in range(q)]
        return out

    def zero(self) -> List[int]:
        return [0] * self.dim

    def sum_a(self) -> List[int]:
        v = self.zero()
        for k in range(self.q * self.q):
            v[2 + k] = 1
        return v

    def sum_b(self) -> List[int]:
        v = self.zero()
        for k in range(self.q * self.q):
            v[2 + self.q * self.q + k] = 1
        return v


def t_set(q: int, i: int, j: int) -> List[Tuple[int, int]]:
    """All (a, b) with a == i or b == j (zero-based)."""
    if not (0 <= i < q and 0 <= j < q):
        raise InvalidInputError(f"index ({i}, {j}) out of range for q={q}")
    return [(a, b) for a in range(q) for b in range(q) if a == i or b == j]


def sigma_class(q: int, i: int, j: int) -> List[int]:
    """Class of the strict transform of {x[i][j] = 0}."""
    basis = PicBasis(q)
    v = basis.zero()
    v[basis.H] = 1
    v[basis.B(i, j)] -= 1
    for a, b in t_set(q, i, j):
        v[basis.A(a, b)] -= 1
        v[basis.B(a, b)] -= 1
    return v


def jr_class(q: int) -> List[int]:
    """Class of the image under J of the determinant hypersurface."""
    basis = PicBasis(q)
    v = basis.zero()
    v[basis.H] = q * q - q
    v[basis.R] = -(q - 1)
    for k in range(q * q):
        v[2 + k] = -(2 * q - 3)
        v[2 + q * q + k] = -(2 * q - 2)
    return v


def _first_columns(q: int, convention: SignConvention):
    b_sign = -1 if convention == SignConvention.ALL_NEGATIVE else 1
    basis = PicBasis(q)
    cols = []
    for h, r in ((q * q - q + 1, -(q - 2)), (q * q - q, -(q - 1))):
        v = basis.zero()
        v[basis.H] = h
        v[basis.R] = r
        for k in range(q * q):
            v[2 + k] = -(2 * q - 3)
            v[2 + q * q + k] = b_sign * (2 * q - 2)
        cols.append(v)
    return cols


def _displayed_a_image(q: int, i: int, j: int) -> List[int]:
    # H - B[j][i] - sum over T(i, j), exactly as the A-line is displayed
    basis = PicBasis(q)
    v = basis.zero()
    v[basis.H] = 1
    v[basis.B(j, i)] -= 1
    for a, b in t_set(q, i, j):
        v[basis.A(a, b)] -= 1
        v[basis.B(a, b)] -= 1
    return v


@lru_cache(maxsize=None)
def pullback_matrix(
    q: int,
    convention: SignConvention = SignConvention.ALL_NEGATIVE,
    transpose_t: bool = False,
) -> IntMat:
    """Integer matrix of K* on Pic; columns are images of basis vectors.

    ``transpose_t=True`` replaces the image of ``A[i][j]`` by
    ``H - B[j][i] - sum over T(i, j)``: the index set ``T(i, j)`` instead of
    ``T(j, i)``. This is the variant rejected in favour of ``Sigma(j, i)``;
    it is kept so the two can be compared.
    """
    convention = SignConvention(convention)
    basis = PicBasis(q)
    cols = _first_columns(q, convention)
    for i in range(q):
        for j in range(q):
            cols.append(_displayed_a_image(q, i, j) if transpose_t else sigma_class(q, j, i))
    for i in range(q):
        for j in range(q):
            v = basis.zero()
            v[basis.A(j, i)] = 1
            v[basis.B(j, i)] = 1
            cols.append(v)
    return IntMat.from_columns(cols)


def _restrict(m: IntMat, vectors: Sequence[Sequence[int]]):
    """Matrix of m on span(vectors), or None if the span is not invariant.

    Returns ``(restricted, offending)`` where ``restricted`` is a rational
    matrix (columns = coordinates of images) and ``offending`` names the
    first vector whose image leaves the span.
    """
    k = len(vectors)
    cols = [list(v) for v in vectors]
    # coordinates by least squares on the normal equations: exact for members of the span
    gram = [[sum(a * b for a, b in zip(u, v)) for v in cols] for u in cols]
    if rank(gram) < k:
        raise InvalidInputError("spanning vectors are linearly dependent")
    gram_inv = inverse(gram)
    out_cols = []
    for idx, v in enumerate(cols):
        img = m @ v
        rhs = [[sum(a * b for a, b in zip(u, img))] for u in cols]
        coords = [c[0] for c in matmul(gram_inv, rhs)]
        back = [sum(coords[t] * cols[t][r] for t in range(k)) for r in range(m.dim)]
        if any(b != a for a, b in zip(img, back)):
            return None, (idx, img)
        out_cols.append(coords)
    return [list(r) for r in zip(*out_cols)], None


def _charpoly_rational(mat: List[list]) -> UPoly:
    """Charpoly of a small rational matrix (expects integral entries here)."""
    if all(getattr(x, "denominator", 1) == 1 for r in mat for x in r):
        return IntMat([[int(x) for x in r] for r in mat]).charpoly()
    raise InvalidInputError("restricted matrix is not integral")


def s1_vectors(q: int) -> List[List[int]]:
    basis = PicBasis(q)
    h = basis.zero()
    h[0] = 1
    r = basis.zero()
    r[1] = 1
    return [h, r, basis.sum_a(), basis.sum_b()]


def s1_restriction(q: int, convention: SignConvention = SignConvention.ALL_NEGATIVE) -> IntMat:
    """4 x 4 matrix of K* on span{H, R1, sum A, sum B}."""
    restricted, bad = _restrict(pullback_matrix(q, SignConvention(convention)), s1_vectors(q))
    if restricted is None:
        raise AssertionError("span{H, R1, sum A, sum B} is not invariant")
    return IntMat([[int(x) for x in r] for r in restricted])


def predicted_degrees(
    q: int, n_max: int, convention: SignConvention = SignConvention.ALL_NEGATIVE
) -> List[DegreeRecord]:
    """``d_n = H-coefficient of M**n e_H`` for n = 0..n_max."""
    convention = SignConvention(convention)
    m = pullback_matrix(q, convention)
    v = [0] * m.dim
    v[0] = 1
    out = []
    for n in range(n_max + 1):
        out.append(DegreeRecord(q, n, v[0], "picard", convention=convention.value))
        v = m @ v
    return out


def p_factor(q: int) -> UPoly:
    """``lambda^2 - (q^2 - 4q + 2) lambda + 1``."""
    return UPoly([1, -(q * q - 4 * q + 2), 1], QQ)


def q_factor(q: int) -> UPoly:
    """``(lambda^2 + 1)^2 - (q-2)^2 lambda^2``."""
    return UPoly([1, 0, 1], QQ) ** 2 - UPoly([0, 0, (q - 2) ** 2], QQ)


@dataclass
class FactorReport:
    q: int
    convention: str
    charpoly: List[int]
    stages: List[dict]
    success: bool
    failed_stage: Optional[str]
    degree_identity: bool

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "convention": self.convention,
            "charpoly": self.charpoly,
            "stages": self.stages,
            "success": self.success,
            "failed_stage": self.failed_stage,
            "degree_identity": self.degree_identity,
        }


@lru_cache(maxsize=None)
def _charpoly_cached(q: int, convention: SignConvention, transpose_t: bool = False) -> UPoly:
    return pullback_matrix(q, convention, transpose_t).charpoly()


def charpoly_factor_check(
    q: int, convention: SignConvention = SignConvention.ALL_NEGATIVE
) -> FactorReport:
    """Divide the charpoly successively by P, Q^(q-1), (l-1)^(q^2-q+2), (l+1)^(q^2-3q+2).

    Every stage must leave a zero remainder and the final quotient must be 1.
    A failure is reported, not raised.
    """
    if q < 3:
        raise InvalidSizeError("factorization check applies to q >= 3")
    convention = SignConvention(convention)
    cp = _charpoly_cached(q, convention)
    e1 = q * q - q + 2
    e2 = q * q - 3 * q + 2
    factors = [
        ("P", p_factor(q), 1),
        ("Q", q_factor(q), q - 1),
        ("lambda-1", UPoly([-1, 1], QQ), e1),
        ("lambda+1", UPoly([1, 1], QQ), e2),
    ]
    stages = []
    rest = cp
    failed = None
    for name, f, e in factors:
        quotient, rem = divmod(rest, f**e)
        ok = rem.is_zero()
        stages.append(
            {
                "factor": name,
                "exponent": e,
                "remainder_zero": ok,
                "remainder_degree": rem.degree(),
            }
        )
        if not ok:
            failed = name
            break
        rest = quotient
    final_one = failed is None and rest == UPoly([1], QQ)
    if failed is None and not final_one:
        failed = "final-quotient"
    stages.append({"factor": "final-quotient", "is_one": final_one, "degree": rest.degree()})
    total = 2 + 4 * (q - 1) + e1 + e2
    return FactorReport(
        q=q,
        convention=convention.value,
        charpoly=cp.int_coeffs(),
        stages=stages,
        success=failed is None,
        failed_stage=failed,
        degree_identity=(total == 2 * q * q + 2 == cp.degree()),
    )


# -- invariant subspaces ------------------------------------------------------


def _pattern_vector(q: int, pattern: Dict[Tuple[int, int], int], part: str) -> List[int]:
    basis = PicBasis(q)
    v = basis.zero()
    for (a, b), c in pattern.items():
        idx = basis.A(a, b) if part == "A" else basis.B(a, b)
        v[idx] += c
    return v


def _pair_pattern(i, j):
    return {(i, i): 1, (j, j): 1, (i, j): -1, (j, i): -1}


def _triple_pattern(i, j, k):
    # antisymmetrized cycle: i->j->k->i minus its transpose (diagonal terms cancel)
    return {(j, i): 1, (k, j): 1, (i, k): 1, (i, j): -1, (j, k): -1, (k, i): -1}


def _line_patterns(q: int, i: int):
    row = {(a, b): (q if a == i else 0) - 1 for a in range(q) for b in range(q)}
    col = {(a, b): (q if b == i else 0) - 1 for a in range(q) for b in range(q)}
    return row, col


def _subspace_result(name, m, vectors, expected: UPoly):
    restricted, bad = _restrict(m, vectors)
    if restricted is None:
        idx, img = bad
        return {
            "subspace": name,
            "invariant": False,
            "offending_vector": vectors[idx],
            "image": img,
        }
    cp = _charpoly_rational(restricted)
    return {
        "subspace": name,
        "invariant": True,
        "charpoly": cp.int_coeffs(),
        "expected": expected.int_coeffs(),
        "match": cp == expected,
    }


def invariant_subspace_check(
    q: int,
    pairs: Optional[Sequence[Tuple[int, int]]] = None,
    triples: Optional[Sequence[Tuple[int, int, int]]] = None,
    lines: Optional[Sequence[int]] = None,
) -> dict:
    """Check the invariant subspaces behind the charpoly factorization.

    * S1 = span{H, R1, sum A, sum B} with charpoly P (l-1)^2;
    * pair spaces span{alpha_ij, beta_ij}, i < j, with (l-1)^2;
    * triple spaces span{alpha_ijk, beta_ijk}, i < j < k, with (l+1)^2;
    * row/column spaces span{A_ri, A_ci, B_ri, B_ci} with Q.

    Defaults sample every pair, triple and line index. Uses the
    all-negative convention.
    """
    if q < 3:
        raise InvalidSizeError("invariant subspace check applies to q >= 3")
    m = pullback_matrix(q, SignConvention.ALL_NEGATIVE)
    lm1 = UPoly([-1, 1], QQ)
    lp1 = UPoly([1, 1], QQ)
    results = [_subspace_result("S1", m, s1_vectors(q), p_factor(q) * lm1**2)]
    if pairs is None:
        pairs = [(i, j) for i in range(q) for j in range(i + 1, q)]
    for i, j in pairs:
        pat = _pair_pattern(i, j)
        vecs = [_pattern_vector(q, pat, "A"), _pattern_vector(q, pat, "B")]
        results.append(_subspace_result(f"pair{(i + 1, j + 1)}", m, vecs, lm1**2))
    if triples is None:
        triples = [
            (i, j, k) for i in range(q) for j in range(i + 1, q) for k in range(j + 1, q)
        ]
    for i, j, k in triples:
        pat = _triple_pattern(i, j, k)
        vecs = [_pattern_vector(q, pat, "A"), _pattern_vector(q, pat, "B")]
        results.append(_subspace_result(f"triple{(i + 1, j + 1, k + 1)}", m, vecs, lp1**2))
    if lines is None:
        lines = list(range(q))
    for i in lines:
        row, col = _line_patterns(q, i)
        vecs = [
            _pattern_vector(q, row, "A"),
            _pattern_vector(q, col, "A"),
            _pattern_vector(q, row, "B"),
            _pattern_vector(q, col, "B"),
        ]
        results.append(_subspace_result(f"line{i + 1}", m, vecs, q_factor(q)))
    ok = all(r["invariant"] and r["match"] for r in results)
    return {"q": q, "convention": "all-negative", "subspaces": results, "success": ok}


# -- dynamical degree ----------------------------------------------------------


@dataclass
class DeltaResult:
    q: int
    p_coeffs: List[int]
    interval: RealInterval
    full_interval: RealInterval
    agree: bool

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "P": self.p_coeffs,
            "delta": {**self.interval.to_dict(), "method": "closed-form"},
            "spectral_radius": {**self.full_interval.to_dict(), "method": "picard"},
            "agree": self.agree,
        }


def delta(q: int, precision=mpq(1, 10**12)) -> DeltaResult:
    """Largest root modulus of P, cross-checked against the full matrix.

    For q = 3 the roots of P are non-real on the unit circle; the result is
    the maximum modulus, 1.
    """
    if q < 3:
        raise InvalidSizeError("the dynamical degree formula applies to q >= 3")
    p = p_factor(q)
    iv = max_root_modulus(p, precision)
    full = max_root_modulus(_charpoly_cached(q, SignConvention.ALL_NEGATIVE), precision)
    return DeltaResult(q, p.int_coeffs(), iv, full, iv.overlaps(full))


def transpose_symmetry_check(q: int) -> dict:
    """Compare the two readings of the A-column index set.

    ``tau`` swaps A[i][j] with A[j][i] and B[i][j] with B[j][i]. The matrix
    built with ``Sigma(j, i)`` commutes with ``tau``. The variant built
    with ``Sigma(i, j)`` is a different operator; the report says whether
    its characteristic polynomial coincides.
    """
    basis = PicBasis(q)
    perm = list(range(basis.dim))
    for i in range(q):
        for j in range(q):
            perm[basis.A(i, j)] = basis.A(j, i)
            perm[basis.B(i, j)] = basis.B(j, i)
    m = pullback_matrix(q)
    conj = IntMat([[m[perm[r], perm[c]] for c in range(basis.dim)] for r in range(basis.dim)])
    cp = _charpoly_cached(q, SignConvention.ALL_NEGATIVE)
    cp_t = _charpoly_cached(q, SignConvention.ALL_NEGATIVE, True)
    return {
        "q": q,
        "commutes_with_transpose": conj == m,
        "variant_charpoly": cp_t.int_coeffs(),
        "same_charpoly": cp == cp_t,
        "variant_spectral_radius": max_root_modulus(cp_t, mpq(1, 10**6)).to_dict(),
    }
