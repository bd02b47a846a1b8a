from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eisenkron.numtheory import divisors, moebius
from eisenkron.qseries import (
    ETA_HAUPTMODUL_EXPONENTS,
    QSeries,
    ThetaCombo,
    UnsupportedInput,
    borcherds_product,
    eta_expansion,
    eta_product,
    hauptmodul,
    inner_product_closed,
    theta_d,
    theta_d_norm,
    unary_theta,
    v_q_operator,
    weyl_vector,
)

SQUAREFREE = [1, 2, 3, 5, 6, 10, 14, 15, 30]


def elements_of_e(N):
    return [d for d in divisors(N) if moebius(d) == 1]


def test_eta_expansion_head():
    eta = eta_expansion(8)
    assert eta.offset == Fraction(1, 24)
    assert list(eta.coeffs) == [1, -1, -1, 0, 0, 1, 0, 1]


def test_eta_product_of_powers():
    # eta^24 = Delta: q - 24 q^2 + 252 q^3 - 1472 q^4 + 4830 q^5
    delta = eta_product({1: 24}, 5)
    assert delta.offset == 1
    assert list(delta.coeffs) == [1, -24, 252, -1472, 4830]


series = st.lists(st.integers(-5, 5), min_size=6, max_size=6).map(lambda xs: QSeries.make(0, [1] + xs))


@given(series)
def test_inverse_is_inverse(f):
    product = f * f.inverse()
    assert list(product.coeffs) == [1] + [0] * 6


@given(series, st.sampled_from([Fraction(1, 2), Fraction(-1, 3), Fraction(3, 4)]))
def test_fractional_powers_compose(f, r):
    assert f.power(r) * f.power(1 - r) == f.power(1)


def test_fractional_power_needs_unit_lead():
    with pytest.raises(UnsupportedInput):
        QSeries.make(0, [2, 1]).power(Fraction(1, 2))


def test_unary_theta_level1():
    theta = unary_theta(1, bound=4)
    assert theta.coefficient(0, 0) == 1
    assert theta.coefficient(1, Fraction(1, 4)) == 2
    assert theta.coefficient(0, 1) == 2
    assert theta.coefficient(1, Fraction(9, 4)) == 2
    assert theta.coefficient(0, 2) == 0


def test_unary_theta_bound_enforced():
    theta = unary_theta(6, bound=2)
    with pytest.raises(IndexError):
        theta.coefficient(0, 3)


@pytest.mark.parametrize("N", SQUAREFREE)
def test_theta_d_constant_terms(N):
    for d in elements_of_e(N):
        value = theta_d(N, d, bound=2).coefficient(0, 0)
        assert value == (len(divisors(N)) if d == 1 else 0)


def test_theta_d_rejects_outside_e():
    with pytest.raises(ValueError):
        theta_d(6, 2)
    with pytest.raises(ValueError):
        theta_d(6, 4)


@pytest.mark.parametrize("N", SQUAREFREE)
def test_theta_d_orthogonal_with_closed_norm(N):
    ds = elements_of_e(N)
    for d in ds:
        for e in ds:
            value = inner_product_closed(ThetaCombo.theta_d(N, d), ThetaCombo.theta_d(N, e)).coef
            assert value == (theta_d_norm(N, d).coef if d == e else 0)


def test_inner_product_examples():
    assert theta_d_norm(6, 6).coef == Fraction(16, 3)
    assert inner_product_closed(ThetaCombo.of(1, {1: 1}), ThetaCombo.of(1, {1: 1})).coef == Fraction(2, 3)


@pytest.mark.parametrize("N", SQUAREFREE)
def test_weyl_vector_closed(N):
    theta = ThetaCombo.of(N, {1: 1})
    for c in divisors(N):
        assert weyl_vector(theta, c) == Fraction(c + N // c, 24)


@pytest.mark.parametrize("N", [1, 2, 6, 10])
def test_borcherds_of_theta_is_eta_pair(N):
    # theta has exponents 1 + [N | n] at (n, n^2/4N), so the product is eta(z) eta(Nz)
    data = borcherds_product(ThetaCombo.of(N, {1: 1}), order=24)
    expected = eta_product({1: 1, N: 1} if N > 1 else {1: 2}, 24)
    assert data.product_expansion(24) == expected
    assert data.weyl_vectors[1] == Fraction(1 + N, 24)


def test_json_round_trip():
    f = theta_d(30, 15, bound=5)
    assert type(f).from_json(f.to_json()) == f


def test_v1_is_identity():
    f = theta_d(6, 1, bound=4)
    assert v_q_operator(f, 1, 6) == f


def test_v_q_rejects_wrong_level():
    with pytest.raises(ValueError):
        v_q_operator(unary_theta(2), 2, 6)


@pytest.mark.parametrize("N, first", [(1, 196884), (2, 4372)])
def test_hauptmodul_two_constructions(N, first):
    by_eta = hauptmodul(N, 8, method="eta")
    by_eisenstein = hauptmodul(N, 8, method="eisenstein")
    assert by_eta == by_eisenstein
    assert by_eta.offset == -1 and by_eta.coeffs[:3] == (1, 0, first)


@pytest.mark.parametrize("N", sorted(ETA_HAUPTMODUL_EXPONENTS))
def test_hauptmodul_normalized_integral(N):
    f = hauptmodul(N, 10)
    assert f.offset == -1 and f.coeffs[0] == 1 and f.coeffs[1] == 0
    assert all(c.denominator == 1 for c in f.coeffs)


def test_hauptmodul_unsupported_level():
    with pytest.raises(UnsupportedInput):
        hauptmodul(11)
