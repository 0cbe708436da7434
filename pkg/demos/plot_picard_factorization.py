"""
Factoring the pullback on the Picard lattice
============================================

The pullback of the reduced map acts on a lattice of rank 2q^2 + 2.
Its characteristic polynomial splits as P Q^(q-1) times powers of
(l - 1) and (l + 1), and the largest root of P is the growth rate.
"""

from matinv.picard import (
    SignConvention,
    charpoly_factor_check,
    delta,
    pullback_matrix,
    s1_restriction,
)

m = pullback_matrix(3)
print("dimension", m.dim, "det", m.det())

rep = charpoly_factor_check(3)
for stage in rep.stages:
    print(stage)

# the sign of the B-coefficients in the H and R columns matters:
# only the all-negative choice is unimodular
for conv in SignConvention:
    s1 = s1_restriction(3, conv)
    print(conv.name, "S1 det", s1.det(), "factors:", charpoly_factor_check(3, conv).success)

# growth rate as a certified interval
for q in range(3, 7):
    res = delta(q)
    print(q, float(res.interval), "agrees with spectral radius:", res.agree)
