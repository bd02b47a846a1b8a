from math import gcd, isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisenkron.numtheory import (
    InvalidDiscriminant,
    divisor_sum,
    divisors,
    euler_phi,
    factorize,
    fundamental_split,
    is_fundamental,
    kronecker_symbol,
    moebius,
    pell_fundamental,
)


@pytest.mark.parametrize("n, expected", [(1, 1), (6, 1), (30, -1), (4, 0), (7, -1)])
def test_moebius_values(n, expected):
    assert moebius(n) == expected


@pytest.mark.parametrize("n, k, expected", [(6, 0, 4), (6, 1, 12), (1, 1, 1), (10, 2, 130)])
def test_divisor_sum_values(n, k, expected):
    assert divisor_sum(n, k) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (15, 8), (6, 2), (97, 96)])
def test_euler_phi_values(n, expected):
    assert euler_phi(n) == expected


def test_kronecker_examples():
    assert kronecker_symbol(-4, 3) == -1
    assert kronecker_symbol(12, 5) == -1
    assert all(kronecker_symbol(D, 1) == 1 for D in range(-20, 21))


def _brute_legendre(D, p):
    # odd prime p: D mod p is a square?
    r = D % p
    if r == 0:
        return 0
    return 1 if any((x * x - r) % p == 0 for x in range(1, p)) else -1


@given(st.integers(-200, 200), st.sampled_from([3, 5, 7, 11, 13, 17, 19, 23]))
def test_kronecker_matches_squares_mod_p(D, p):
    assert kronecker_symbol(D, p) == _brute_legendre(D, p)


@given(st.integers(1, 300), st.integers(1, 300))
def test_moebius_multiplicative_on_coprime(a, b):
    if gcd(a, b) == 1:
        assert moebius(a * b) == moebius(a) * moebius(b)


def test_moebius_sum_over_divisors():
    for n in range(1, 10**4 + 1):
        assert sum(moebius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@given(st.integers(2, 10**6))
def test_factorize_recomposes(n):
    prod = 1
    for p, e in factorize(n):
        assert all(p % q for q in range(2, isqrt(p) + 1))
        prod *= p**e
    assert prod == n


@pytest.mark.parametrize("delta, expected", [(12, (12, 1)), (-16, (-4, 2)), (5, (5, 1)), (-3 * 25, (-3, 5)), (288, (8, 6))])
def test_fundamental_split_examples(delta, expected):
    sp = fundamental_split(delta)
    assert (sp.D0, sp.f) == expected


@given(st.integers(-10**5, 10**5).filter(lambda d: d != 0 and d % 4 in (0, 1)))
def test_fundamental_split_recomposes(delta):
    sp = fundamental_split(delta)
    assert sp.recompose() == delta
    assert is_fundamental(sp.D0)


@pytest.mark.parametrize("bad", [0, 2, 3, -1, 7])
def test_fundamental_split_rejects(bad):
    with pytest.raises(InvalidDiscriminant):
        fundamental_split(bad)


@pytest.mark.parametrize("D, expected", [(5, (3, 1)), (8, (6, 2)), (12, (4, 1))])
def test_pell_examples(D, expected):
    assert pell_fundamental(D) == expected


def _smallest_u(D, limit):
    for u0 in range(1, limit + 1):
        t2 = 4 + D * u0 * u0
        if isqrt(t2) ** 2 == t2:
            return u0
    return None


def test_pell_minimal_by_search():
    # the exhaustive search is capped; a few D below 500 have fundamental u beyond 10^9
    searched = 0
    for D in range(2, 501):
        if D % 4 not in (0, 1) or isqrt(D) ** 2 == D:
            continue
        t, u = pell_fundamental(D)
        assert t * t - D * u * u == 4 and t > 0 and u > 0
        u0 = _smallest_u(D, min(u, 200_000))
        if u <= 200_000:
            assert u0 == u
            searched += 1
        else:
            assert u0 is None
    assert searched >= 180


def test_pell_rejects_square():
    with pytest.raises(ValueError):
        pell_fundamental(9)
