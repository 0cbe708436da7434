import random

import pytest
from gmpy2 import mpq

from matinv.charts import (
    Pi1Chart,
    Pi2Chart,
    Pi3Chart,
    Prop21Prediction,
    expected_valuations,
    prop21_limit_check,
    prop31_image_check,
    prop4_homogeneity_check,
    rank_one_adjugate_check,
    valuation_orders_check,
)
from matinv.errors import ChartDomainError, InvalidInputError, InvalidSizeError
from matinv.matrix_maps import rank


def _rq(rng):
    n = 0
    while not n:
        n = rng.randint(-40, 40)
    return mpq(n, rng.randint(1, 20))


def _cross(rng, q, corner=True):
    z = [[mpq(0)] * q for _ in range(q)]
    for j in range(q):
        z[0][j] = _rq(rng)
        z[j][0] = _rq(rng)
    if not corner:
        z[0][0] = mpq(0)
    z[0][1] = mpq(1)
    return z


def _lower(rng, q):
    v = [[mpq(0)] * q for _ in range(q)]
    for i in range(1, q):
        for j in range(1, q):
            v[i][j] = _rq(rng)
    v[1][1] = mpq(1)
    return v


def _pi1(rng, q):
    lam = [mpq(1)] + [_rq(rng) for _ in range(q - 1)]
    nu = [mpq(1)] + [_rq(rng) for _ in range(q - 1)]
    return Pi1Chart(_rq(rng), lam, nu, _lower(rng, q))


@pytest.mark.parametrize("q", [3, 4, 5])
def test_chart_round_trips(q):
    rng = random.Random(q)
    for _ in range(100):
        c1 = _pi1(rng, q)
        assert Pi1Chart.invert(c1.project()) == c1
        c2 = Pi2Chart(_rq(rng), _cross(rng, q), _lower(rng, q))
        assert Pi2Chart.invert(c2.project()) == c2
        c3 = Pi3Chart(_rq(rng), _rq(rng), _cross(rng, q, corner=False), _lower(rng, q))
        assert Pi3Chart.invert(c3.project()) == c3


def test_special_fibres():
    rng = random.Random(1)
    q = 4
    c1 = _pi1(rng, q)
    c1.s = mpq(0)
    assert rank(c1.project()) == 1
    c2 = Pi2Chart(mpq(0), _cross(rng, q), _lower(rng, q))
    x = c2.project()
    assert all(not x[0][j] and not x[j][0] for j in range(q))
    c3 = Pi3Chart(mpq(2), mpq(5), _cross(rng, q, corner=False), _lower(rng, q))
    assert c3.project()[0][0] == 20


def test_chart_validation():
    rng = random.Random(2)
    with pytest.raises(InvalidInputError):
        Pi1Chart(mpq(1), [2, 1, 1], [1, 1, 1], _lower(rng, 3))
    with pytest.raises(InvalidInputError):
        Pi3Chart(mpq(1), mpq(1), _cross(rng, 3, corner=True), _lower(rng, 3))
    x = Pi2Chart(mpq(0), _cross(rng, 3), _lower(rng, 3)).project()
    with pytest.raises(ChartDomainError):
        Pi2Chart.invert(x)
    with pytest.raises(ChartDomainError):
        Pi1Chart.invert([[0, 1, 1], [1, 1, 1], [1, 1, 1]])


def test_limit_prediction_structure():
    rng = random.Random(3)
    c = _pi1(rng, 4)
    pred = Prop21Prediction.build(c.lam, c.nu, c.v)
    assert all(pred.A[i][i] == 1 for i in range(4)) and pred.A[0][1] == 0
    assert all(pred.B[i][0] == 0 for i in range(1, 4))
    assert rank(pred.image) == 3
    # rescaling v rescales inv(v') but not the projective class
    scaled = Prop21Prediction.build(c.lam, c.nu, [[2 * e for e in r] for r in c.v])
    flat = [e for r in pred.image for e in r]
    flat2 = [e for r in scaled.image for e in r]
    assert all(2 * b == a for a, b in zip(flat, flat2))


@pytest.mark.parametrize("q", [3, 4])
def test_rank_one_limit(q):
    rep = prop21_limit_check(q, trials=10, seed=1)
    assert rep["failures"] == 0 and rep["passes"] == 10


def test_rank_one_limit_python_backend():
    assert prop21_limit_check(3, trials=3, seed=2, backend="python")["failures"] == 0


@pytest.mark.parametrize("q", [3, 4, 5])
def test_rank_one_adjugate(q):
    assert rank_one_adjugate_check(q, 100, seed=3)["failures"] == 0


@pytest.mark.parametrize("q", [3, 4])
def test_exceptional_image(q):
    rep = prop31_image_check(q, trials=20, seed=4)
    assert rep["trials"] == q * q * 20
    assert rep["failures"] == 0 and rep["block_checks"] == 20


@pytest.mark.parametrize("q", [3, 4])
def test_homogeneity_and_unit_valuations(q):
    rep = prop4_homogeneity_check(q, trials=50, seed=5)
    assert rep["failures"] == 0
    for sub in rep["valuation_checks"]:
        assert sub["failures"] == 0 and sub["passes"] == 50


def test_homogeneity_python_backend():
    rep = prop4_homogeneity_check(3, trials=3, seed=6, backend="python")
    assert rep["failures"] == 0
    assert all(s["failures"] == 0 for s in rep["valuation_checks"])


@pytest.mark.parametrize("q", [3, 4, 5])
def test_vanishing_orders(q):
    rep = valuation_orders_check(q, seed=7)
    assert rep["failures"] == 0
    got = {(r["function"], r["chart"]): r["measured"] for r in rep["valuations"]}
    exp = expected_valuations(q)
    for fn, charts in exp.items():
        for chart, want in charts.items():
            assert got[(fn, chart)] == want


def test_vanishing_orders_q3_values():
    exp = expected_valuations(3)
    assert [exp["P"][c] for c in ("pi1", "pi2", "pi3")] == [2, 3, 4]
    assert [exp["hyperplane"][c] for c in ("pi1", "pi2", "pi3")] == [1, 3, 4]
    assert [expected_valuations(5)["P"][c] for c in ("pi1", "pi2", "pi3")] == [4, 7, 8]


def test_report_schema():
    rep = prop21_limit_check(3, trials=1)
    assert {"proposition", "q", "trials", "passes", "failures", "samples_of_failure"} <= set(rep)
    with pytest.raises(InvalidSizeError):
        prop31_image_check(2)
