"""Exact arithmetic substrate: scalars, polynomials, integer matrices, roots."""
from .intmat import IntMat, charpoly
from .linalg import adjugate, bareiss_det, det_expand, inverse, matmul, rank, row_cofactors
from .mpoly import MPoly
from .roots import (
    RealInterval,
    count_real_roots,
    isolate_max_real_root,
    max_root_modulus,
    squarefree_part,
    sturm_sequence,
)
from .scalars import QQ, FpElement, PrimeField, RationalField, domain_of, random_prime, to_rational
from .upoly import INFINITE_VALUATION, UPoly, tuple_content_reduce, upoly_gcd

__all__ = [
    "QQ",
    "RationalField",
    "PrimeField",
    "FpElement",
    "domain_of",
    "random_prime",
    "to_rational",
    "UPoly",
    "INFINITE_VALUATION",
    "upoly_gcd",
    "tuple_content_reduce",
    "MPoly",
    "IntMat",
    "charpoly",
    "RealInterval",
    "sturm_sequence",
    "count_real_roots",
    "squarefree_part",
    "isolate_max_real_root",
    "max_root_modulus",
    "adjugate",
    "bareiss_det",
    "det_expand",
    "inverse",
    "matmul",
    "rank",
    "row_cofactors",
]
