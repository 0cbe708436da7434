import json
from fractions import Fraction

import pytest

from matinv.degree_engine import (
    DegreeCache,
    DegreeRecord,
    LineProbe,
    derive_seed,
    estimate_delta,
    probe_degrees,
    run_probe,
    symbolic_degree_oracle,
)
from matinv.errors import InvalidInputError, InvalidSizeError, ScopeError
from matinv.picard import predicted_degrees


def degrees(records):
    return [r.degree for r in records]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_first_iterate_has_degree_q2_minus_q_plus_1(q):
    recs = probe_degrees(q, 1, seed=3)
    assert recs[0].degree == 1
    assert recs[1].degree == q * q - q + 1


def test_probe_q3_sequence_and_metadata():
    recs = probe_degrees(3, 4, seed=0)
    assert degrees(recs) == [1, 7, 16, 19, 25]
    for r in recs:
        assert r.method == "probe"
        assert r.agreement >= 2
        assert len(set(r.seeds)) == len(r.seeds) >= 2
        assert len(r.primes) >= 2 and all(2**60 <= p < 2**63 for p in r.primes)


def test_removed_degree_bookkeeping():
    q = 4
    recs = probe_degrees(q, 3, seed=5)
    k = q * q - q + 1
    for prev, cur in zip(recs, recs[1:]):
        assert cur.removed_degree == k * prev.degree - cur.degree >= 0


def test_degrees_bounded_by_naive_power():
    recs = probe_degrees(4, 3, seed=2)
    for r in recs[1:]:
        assert 1 <= r.degree <= 13**r.n


def test_backends_and_fields_agree():
    ref = degrees(probe_degrees(3, 3, seed=9))
    assert degrees(probe_degrees(3, 3, seed=9, backend="python")) == ref
    assert degrees(probe_degrees(3, 3, seed=9, field="qq")) == ref
    assert degrees(probe_degrees(3, 2, seed=9, field="qq", backend="python")) == ref[:3]


def test_probe_matches_picard_q4():
    assert degrees(probe_degrees(4, 4, seed=1)) == degrees(predicted_degrees(4, 4))


def test_determinism():
    a = [r.to_dict() for r in probe_degrees(3, 3, seed=42)]
    b = [r.to_dict() for r in probe_degrees(3, 3, seed=42)]
    assert a == b
    line1 = LineProbe.sample(3, 1234)
    line2 = LineProbe.sample(3, 1234)
    assert line1 == line2
    assert run_probe(line1, 3) == run_probe(line2, 3)


def test_derived_seeds_are_distinct():
    seeds = {derive_seed(7, "probe/q3/run0", k) for k in range(50)}
    assert len(seeds) == 50
    assert derive_seed(7, "a") != derive_seed(8, "a")


def test_prime_bits_respected():
    for bits in (61, 62, 63):
        recs = probe_degrees(3, 1, seed=1, prime_bits=bits)
        assert all(2 ** (bits - 1) <= p < 2**bits for p in recs[1].primes)


def test_bad_arguments():
    with pytest.raises(InvalidSizeError):
        probe_degrees(1, 2)
    with pytest.raises(InvalidInputError):
        probe_degrees(3, 2, backend="gpu")


def test_estimate_delta():
    est = estimate_delta([21, 206, 1531])
    assert est.last_ratio == Fraction(1531, 206)
    assert abs(float(est) - 7.43) < 0.01
    assert estimate_delta([5, 5, 5, 5]).last_ratio == 1
    assert estimate_delta([5, 5, 5]).fitted_ratio == 1
    ratios = [estimate_delta([13, 65, 189, 417][: k + 1]).last_ratio for k in range(2, 4)]
    assert ratios[0] > ratios[1] > 1
    with pytest.raises(InvalidInputError):
        estimate_delta([1, 7])


def test_symbolic_oracle_first_iterate():
    r = symbolic_degree_oracle(3, 1)
    assert (r.degree, r.removed_degree) == (7, 9)
    assert symbolic_degree_oracle(2, 1).degree == 3
    with pytest.raises(ScopeError):
        symbolic_degree_oracle(4, 1)
    with pytest.raises(ScopeError):
        symbolic_degree_oracle(3, 3)


@pytest.mark.slow
def test_symbolic_oracle_second_iterate():
    assert symbolic_degree_oracle(3, 2).degree == 16


def test_cache_round_trip(tmp_path):
    recs = probe_degrees(3, 3, seed=4, cache_path=tmp_path)
    cache = DegreeCache(tmp_path)
    rows = cache.records()
    assert len(rows) == 2 * 4
    assert list(rows[0]) == ["q", "n", "degree", "method", "seed", "prime", "timestamp", "removed_degree"]
    again = probe_degrees(3, 3, seed=4, cache_path=tmp_path)
    assert [r.to_dict() for r in again] == [r.to_dict() for r in recs]
    assert len(cache.records()) == 8
    assert cache.summary() == [{"q": 3, "method": "probe", "records": 8, "max_n": 3}]
    assert cache.clear() == 8
    assert cache.records() == []


def test_cache_lines_are_json(tmp_path):
    probe_degrees(2, 2, seed=1, cache_path=tmp_path)
    for line in (tmp_path / "degrees.jsonl").read_text().splitlines():
        json.loads(line)


def test_record_serialization():
    r = DegreeRecord(3, 2, 16, "probe", [1, 2], [5, 7], 2, 33)
    d = r.to_dict()
    assert d["degree"] == 16 and d["removed_degree"] == 33
