from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisenkron.discgroup import (
    AtkinLehner,
    DiscElement,
    Level,
    atkin_lehner_apply,
    atkin_lehner_table,
    character_value,
    even_divisor_set,
    q_of,
    star,
)
from eisenkron.numtheory import divisor_sum, divisors, euler_phi, is_squarefree, moebius
from math import gcd

SQUAREFREE = [N for N in range(1, 211) if is_squarefree(N)]


@pytest.mark.parametrize("N, beta, expected", [(1, 0, Fraction(0)), (1, 1, Fraction(1, 4)), (6, 5, Fraction(1, 24))])
def test_q_of(N, beta, expected):
    assert q_of(DiscElement(Level(N), beta)) == expected


@pytest.mark.parametrize("c, beta, expected", [(1, 5, 5), (6, 1, 11), (2, 1, 7)])
def test_atkin_lehner_examples(c, beta, expected):
    w = AtkinLehner(Level(6), c)
    assert atkin_lehner_apply(w, DiscElement(Level(6), beta)).beta == expected


@given(st.sampled_from(SQUAREFREE), st.data())
def test_atkin_lehner_involution_and_norm(N, data):
    c = data.draw(st.sampled_from(divisors(N)))
    table = atkin_lehner_table(N, c)
    for b in range(2 * N):
        assert table[table[b]] == b
        assert (table[b] ** 2 - b * b) % (4 * N) == 0
    assert atkin_lehner_table(N, 1) == tuple(range(2 * N))
    assert atkin_lehner_table(N, N) == tuple((-b) % (2 * N) for b in range(2 * N))


def test_star_examples():
    assert star(2, 6) == 3
    assert star(5, 5) == 1
    assert star(3, 10) == 30


@pytest.mark.parametrize("N, expected", [(1, [1]), (6, [1, 6]), (30, [1, 6, 10, 15])])
def test_even_divisor_set(N, expected):
    assert sorted(even_divisor_set(Level(N))) == expected


def test_character_value_examples():
    assert character_value(1, 6) == 1
    assert character_value(6, 6) == 1
    assert character_value(2, 6) == -1


def test_character_orthogonality():
    for N in SQUAREFREE:
        ds = divisors(N)
        for d in ds:
            for e in ds:
                total = sum(moebius(gcd(c, d)) * moebius(gcd(c, e)) for c in ds)
                assert total == (len(ds) if star(d, e) == 1 else 0)


def test_character_is_homomorphism():
    for N in (30, 210):
        ds = divisors(N)
        for d in ds:
            for a in ds:
                for b in ds:
                    assert character_value(star(a, b), d) == character_value(a, d) * character_value(b, d)


def test_character_sum_closed_form():
    for N in SQUAREFREE:
        for d in divisors(N):
            lhs = sum(moebius(gcd(c, d)) * c for c in divisors(N))
            assert lhs == moebius(d) * divisor_sum(N // d, 1) * euler_phi(d)


def test_level_rejects_non_squarefree():
    with pytest.raises(ValueError):
        Level(12)
