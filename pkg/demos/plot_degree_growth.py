"""
Degree growth of the matrix inversion composite
===============================================

Iterate the reduced map on a random line and watch the degrees grow.
The probe works modulo a large prime; the Picard action predicts the
same numbers from a single integer matrix.
"""

from matinv.degree_engine import estimate_delta, probe_degrees
from matinv.picard import predicted_degrees

# q = 3: linear growth, 18 more every three steps
for q, n in [(3, 4), (4, 3)]:
    probed = [r.degree for r in probe_degrees(q, n, seed=1)]
    predicted = [r.degree for r in predicted_degrees(q, n)]
    print(f"q={q} probe   {probed}")
    print(f"q={q} picard  {predicted}")

# longer runs are cheap on the Picard side
for q in (3, 4, 5):
    records = predicted_degrees(q, 10)
    est = estimate_delta(records)
    print(f"q={q} d_10={records[-1].degree} ratio~{float(est.last_ratio):.4f}")

# q = 4 grows like a cubic: third differences are constant
d = [r.degree for r in predicted_degrees(4, 8)]
for _ in range(3):
    d = [b - a for a, b in zip(d, d[1:])]
print("q=4 third differences", d)
