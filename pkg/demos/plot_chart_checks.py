"""
Local checks on the blow-up charts
==================================

Three charts resolve the indeterminacy of the reduced map near a rank-one
matrix. Each check below samples random points, evaluates the map exactly
and compares against the predicted limit or vanishing order.
"""

from matinv.charts import (
    expected_valuations,
    prop21_limit_check,
    rank_one_adjugate_check,
    valuation_orders_check,
)

q = 3

# approaching a rank-one matrix along the first chart
rep = prop21_limit_check(q, trials=5, seed=0)
print("limit along pi1:", rep["passes"], "/", rep["trials"])

# the adjugate of a rank-one matrix vanishes
print("rank-one adjugate:", rank_one_adjugate_check(q, trials=20)["failures"], "failures")

# vanishing orders of the product of entries and of a coordinate hyperplane
print("expected", expected_valuations(q))
for row in valuation_orders_check(q, seed=0)["valuations"]:
    print(row["function"], row["chart"], row["measured"], row["expected"])
