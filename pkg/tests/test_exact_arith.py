import random
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from matinv.errors import (
    DegenerateInputError,
    DomainMismatchError,
    InexactDivisionError,
    InvalidInputError,
)
from matinv.exact_arith import (
    QQ,
    IntMat,
    MPoly,
    PrimeField,
    UPoly,
    count_real_roots,
    isolate_max_real_root,
    max_root_modulus,
    random_prime,
    sturm_sequence,
    to_rational,
    tuple_content_reduce,
    upoly_gcd,
)
from matinv.exact_arith.linalg import adjugate, bareiss_det, det_expand, inverse, matmul, rank

P61 = 2305843009213693951  # 2**61 - 1


# -- scalars --------------------------------------------------------------------


def test_to_rational_accepts_strings_and_fractions():
    assert to_rational("3/6") == mpq(1, 2)
    assert to_rational(Fraction(-4, 6)) == mpq(-2, 3)
    assert to_rational(7) == 7
    with pytest.raises(InvalidInputError):
        to_rational(0.5)


def test_rationals_are_canonical():
    x = to_rational("-10/-4")
    assert (x.numerator, x.denominator) == (5, 2)


@given(st.fractions(), st.fractions().filter(lambda f: f != 0))
def test_rational_round_trip(a, c):
    a, c = to_rational(a), to_rational(c)
    assert (a + c) - c == a
    assert (a * c) / c == a


def test_prime_field_reduces_and_refuses_mixing():
    f = PrimeField(P61)
    g = PrimeField(1000000007)
    x = f(-1)
    assert int(x) == P61 - 1
    assert x + 1 == 0
    assert f(3) / f(3) == 1
    with pytest.raises(DomainMismatchError):
        f(1) + g(1)
    with pytest.raises(DomainMismatchError):
        f(1) + mpq(1, 2)


def test_prime_field_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        1 / PrimeField(101)(0)


def test_random_prime_range():
    rng = random.Random(5)
    for bits in (61, 62, 63):
        p = random_prime(rng, bits)
        assert 2 ** (bits - 1) <= p < 2**bits
    with pytest.raises(ValueError):
        random_prime(rng, 40)


# -- univariate polynomials ----------------------------------------------------------


def test_upoly_basic_queries():
    x = UPoly.gen()
    p = x**3 - x
    assert p.degree() == 3
    assert p.valuation() == 1
    assert UPoly.zero().degree() == -1
    assert UPoly.zero().valuation() == float("inf")
    assert p(2) == 6


def test_gcd_examples():
    x = UPoly.gen()
    assert upoly_gcd(x**2 - 1, x - 1) == x - 1
    f = (x - 3) * 2
    assert upoly_gcd(f, UPoly.zero()) == f.monic()
    with pytest.raises(DomainMismatchError):
        upoly_gcd(x, UPoly.gen(PrimeField(101)))


def test_gcd_over_fp_recovers_planted_factor():
    dom = PrimeField(P61)
    rng = random.Random(2)
    x = UPoly.gen(dom)
    for _ in range(10):
        c = rng.randrange(P61)
        g = UPoly([rng.randrange(P61) for _ in range(6)] + [1], dom)
        h = UPoly([rng.randrange(P61) for _ in range(5)] + [1], dom)
        if upoly_gcd(g, h).degree() > 0:
            continue
        got = upoly_gcd((x - c) * g, (x - c) * h)
        assert got == x - c
        assert ((x - c) * g).divexact(got) == g


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(-20, 20), min_size=1, max_size=6),
    st.lists(st.integers(-20, 20), min_size=1, max_size=6),
    st.lists(st.integers(-20, 20), min_size=2, max_size=4),
)
def test_gcd_multiplicativity(fc, gc, hc):
    dom = PrimeField(1000003)
    f, g, h = (UPoly(c, dom) for c in (fc, gc, hc))
    if f.is_zero() or g.is_zero() or h.is_zero():
        return
    lhs = upoly_gcd(f * h, g * h)
    rhs = (h * upoly_gcd(f, g)).monic()
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-50, 50), min_size=1, max_size=8),
    st.lists(st.integers(-50, 50), min_size=1, max_size=5),
)
def test_division_identity(ac, bc):
    a, b = UPoly(ac), UPoly(bc)
    if b.is_zero():
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree() < b.degree()


def test_divexact_raises_on_remainder():
    x = UPoly.gen()
    with pytest.raises(InexactDivisionError):
        (x**2 + 1).divexact(x - 1)


def test_kronecker_multiplication_matches_schoolbook():
    dom = PrimeField(P61)
    rng = random.Random(9)
    a = [rng.randrange(P61) for _ in range(120)]
    b = [rng.randrange(P61) for _ in range(90)]
    prod = UPoly(a, dom) * UPoly(b, dom)
    naive = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            naive[i + j] = (naive[i + j] + x * y) % P61
    assert [int(c) for c in prod.coeffs] == naive


def test_tuple_content_reduce_examples():
    x = UPoly.gen()
    f, g = x**2 + 1, x + 2
    reduced, removed = tuple_content_reduce([x * f, x * g])
    assert (reduced, removed) == ([f, g], 1)
    reduced, removed = tuple_content_reduce([f, g])
    assert (reduced, removed) == ([f, g], 0)
    with pytest.raises(DegenerateInputError):
        tuple_content_reduce([UPoly.zero(), UPoly.zero()])


def test_tuple_content_reduce_handles_zero_entries():
    x = UPoly.gen()
    reduced, removed = tuple_content_reduce([UPoly.zero(), (x - 1) ** 2, (x - 1) * x])
    assert removed == 1
    assert reduced[0].is_zero()


# -- multivariate polynomials -----------------------------------------------------------


def test_mpoly_arithmetic_and_divexact():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    f = (x + y) ** 3
    assert f.total_degree() == 3 and f.is_homogeneous()
    assert f.divexact(x + y) == (x + y) ** 2
    assert (x * y * f).divexact(x * y) == f
    with pytest.raises(InexactDivisionError):
        (x**2 + y).divexact(x)
    assert f.evaluate([1, 2]) == 27
    assert (x * y).min_exponent(0) == 1


def test_mpoly_compose():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    f = x * x - y
    g = f.compose([x + y, x - y])
    assert g == (x + y) ** 2 - (x - y)


# -- linear algebra -----------------------------------------------------------------------


def _rand_int_matrix(rng, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def test_determinant_routines_agree():
    rng = random.Random(3)
    for n in range(1, 6):
        m = _rand_int_matrix(rng, n)
        assert det_expand(m) == bareiss_det(m)


def test_adjugate_identity_including_singular():
    rng = random.Random(4)
    for n in (2, 3, 4):
        for singular in (False, True):
            m = _rand_int_matrix(rng, n)
            if singular:
                m[-1] = [a + b for a, b in zip(m[0], m[1])]
            adj = adjugate(m)
            d = det_expand(m)
            prod = matmul(adj, m)
            assert prod == [[d if i == j else 0 for j in range(n)] for i in range(n)]


def test_rank_and_inverse():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    m = [[2, 1], [1, 1]]
    inv = inverse(m)
    assert matmul(m, inv) == [[1, 0], [0, 1]]


def test_charpoly_examples():
    lam = UPoly.gen()
    assert IntMat.identity(2).charpoly() == (lam - 1) ** 2
    assert IntMat([[2, 0], [0, 3]]).charpoly() == (lam - 2) * (lam - 3)


def test_cayley_hamilton_random():
    rng = random.Random(11)
    for _ in range(10):
        m = IntMat(_rand_int_matrix(rng, 5))
        cp = m.charpoly().int_coeffs()
        acc = IntMat([[0] * 5 for _ in range(5)])
        power = IntMat.identity(5)
        for c in cp:
            acc = acc + power.scale(c)
            power = power @ m
        assert acc == IntMat([[0] * 5 for _ in range(5)])


def test_charpoly_matches_determinant_at_points():
    rng = random.Random(12)
    m = IntMat(_rand_int_matrix(rng, 6))
    cp = m.charpoly()
    for t in (-3, 0, 2, 7):
        shifted = [[(t if i == j else 0) - m[i, j] for j in range(6)] for i in range(6)]
        assert cp(t) == bareiss_det(shifted)


# -- roots -----------------------------------------------------------------------------------


def test_isolate_max_real_root_examples():
    lam = UPoly.gen()
    iv = isolate_max_real_root(lam**2 - 7 * lam + 1, mpq(1, 10**10))
    golden = (7 + 3 * 5**0.5) / 2
    assert iv.width <= mpq(1, 10**10)
    assert abs(float(iv) - golden) < 1e-9
    assert isolate_max_real_root(lam**2 + lam + 1, mpq(1, 100)) is None
    one = isolate_max_real_root((lam - 1) ** 2, mpq(1, 100))
    assert one.contains(1)
    with pytest.raises(DegenerateInputError):
        isolate_max_real_root(UPoly.zero(), mpq(1, 10))


def test_isolated_interval_is_sturm_certified():
    lam = UPoly.gen()
    p = (lam**2 - 2) * (lam + 5) * (lam - mpq(1, 3))
    iv = isolate_max_real_root(p, mpq(1, 10**8))
    seq = sturm_sequence(p)
    if iv.lo == iv.hi:
        assert p(iv.lo) == 0
    else:
        assert count_real_roots(seq, iv.lo, iv.hi) == 1
        assert count_real_roots(seq, iv.hi, 10**6) == 0


def test_max_root_modulus_examples():
    lam = UPoly.gen()
    prec = mpq(1, 10**10)
    iv = max_root_modulus(lam**2 + lam + 1, prec)
    assert iv.lo == iv.hi == 1
    iv = max_root_modulus(lam**2 - 7 * lam + 1, prec)
    assert abs(float(iv) - (7 + 3 * 5**0.5) / 2) < 1e-9
    assert max_root_modulus(lam - 5, prec).lo == 5
    # complex pair of modulus sqrt(5) dominating a real root 2
    iv = max_root_modulus((lam**2 - 2 * lam + 5) * (lam - 2), prec)
    assert abs(float(iv) - 5**0.5) < 1e-9
