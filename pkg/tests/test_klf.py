import random
from fractions import Fraction
from math import gcd

import mpmath
import pytest

from eisenkron.klf import (
    HAUPTMODUL_LEVELS,
    elliptic_klf,
    eta_value,
    genus_zero_product_order,
    hauptmodul_value,
    hyperbolic_klf,
    hyperbolic_klf_constants,
    numeric_cusp_order,
    parabolic_klf,
)
from eisenkron.numtheory import euler_phi
from eisenkron.qseries import UnsupportedInput, hauptmodul

TOL = mpmath.mpf(10) ** -25
POINTS = [mpmath.mpc("0.1234", "0.8765"), mpmath.mpc("-0.4", "1.3"), mpmath.mpc("0.31", "0.52")]


def mp_eta(z):
    q = mpmath.expjpi(2 * z)
    return mpmath.expjpi(z / 12) * mpmath.qp(q)


def gamma0(N, rng):
    while True:
        c = N * rng.randint(-4, 4)
        d = rng.randint(-7, 7)
        if c and gcd(c, d) == 1:
            a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
            b = (a * d - 1) // c
            return a, b, c, d


def act(M, z):
    a, b, c, d = M
    return (a * z + b) / (c * z + d)


@pytest.mark.parametrize("z", POINTS + [mpmath.mpc("0.02", "0.05")])
def test_eta_against_product_formula(z):
    assert abs(eta_value(z) - mp_eta(z)) < TOL * max(1, abs(mp_eta(z)))


def test_eta_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        eta_value(mpmath.mpc(0, -1))


@pytest.mark.parametrize("z", POINTS)
def test_level1_hauptmodul_is_j_minus_744(z):
    assert abs(hauptmodul_value(1, z) - (1728 * mpmath.kleinj(z) - 744)) < TOL * 1e3


@pytest.mark.parametrize("N", HAUPTMODUL_LEVELS)
def test_hauptmodul_value_matches_series(N):
    z = mpmath.mpc("0.1", "1.2")
    series = hauptmodul(N, 24)
    q = mpmath.expjpi(2 * z)
    total = sum(mpmath.mpf(c.numerator) / c.denominator * q ** (series.offset + k) for k, c in enumerate(series.coeffs))
    # the first omitted power is q^23, about e^-173
    assert abs(hauptmodul_value(N, z) - total) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("N", HAUPTMODUL_LEVELS)
def test_hauptmodul_fricke_invariant(N):
    for z in POINTS:
        w = -1 / (N * z)
        assert abs(hauptmodul_value(N, w) - hauptmodul_value(N, z)) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize(
    "N, involution",
    [(6, (4, 1, 6, 2)), (6, (3, 1, 6, 3)), (10, (6, 1, 10, 2)), (10, (5, 2, 10, 5))],
)
def test_hauptmodul_atkin_lehner_invariant(N, involution):
    a, b, c, d = involution
    assert a * d - b * c in (2, 3, 5)
    for z in POINTS:
        w = (a * z + b) / (c * z + d)
        assert abs(hauptmodul_value(N, w) - hauptmodul_value(N, z)) < mpmath.mpf(10) ** -20


def test_parabolic_level1():
    res = parabolic_klf(1)
    assert res.closed_form["eta_exponents"] == {1: 4}
    assert res.constant_term == 1
    for z in POINTS:
        assert abs(res(z) - (4 * mpmath.log(abs(mp_eta(z))) + mpmath.log(z.imag))) < TOL


@pytest.mark.parametrize("N", [1, 6, 10])
def test_parabolic_invariance(N):
    res = parabolic_klf(N)
    rng = random.Random(N)
    for z in POINTS:
        M = gamma0(N, rng)
        assert abs(res(act(M, z)) - res(z)) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("N, n", [(6, 1), (6, 5), (10, 3), (15, 7), (35, 2)])
def test_hyperbolic_pq_specialization(N, n):
    consts = hyperbolic_klf_constants(N, n, Fraction(n * n, 4 * N))
    assert consts[N] == Fraction(6 * n, euler_phi(N))


def test_hyperbolic_nonsquare_vanishes():
    res = hyperbolic_klf(6, 1, Fraction(1 + 3 * 24, 24))
    assert res.closed_form["vanishes"]
    assert res(POINTS[0]) == 0


def test_hyperbolic_invariance():
    res = hyperbolic_klf(6, 1, Fraction(1, 24))
    rng = random.Random(6)
    for z in POINTS:
        assert abs(res(act(gamma0(6, rng), z)) - res(z)) < mpmath.mpf(10) ** -20


def test_elliptic_level1_at_i():
    res = elliptic_klf(1, 0, -1)
    assert [p["exponent"] for p in res.closed_form["heegner_points"]] == [Fraction(1, 2)]
    for z in POINTS:
        expected = -mpmath.log(abs(1728 * mpmath.kleinj(z) - 1728)) / 2
        assert abs(res(z) - expected) < mpmath.mpf(10) ** -22


def test_elliptic_cusp_order_two_ways():
    for N, beta, D in [(1, 0, -4), (1, 1, -3), (6, 1, -23), (2, 1, -7)]:
        res = elliptic_klf(N, beta, Fraction(D, 4 * N))
        series_order = genus_zero_product_order(N, beta, Fraction(D, 4 * N))
        # infinity is the cusp 1/N
        assert res.closed_form["cusp_orders"][N] == series_order
        assert abs(numeric_cusp_order(res) - series_order) < mpmath.mpf(10) ** -6


def test_elliptic_without_hauptmodul():
    res = elliptic_klf(11, 1, Fraction(-43, 44))
    assert res.kl_function is None
    assert '"evaluator": null' in res.to_json()
    with pytest.raises(UnsupportedInput):
        res(POINTS[0])


def test_kind_specific_index_checks():
    with pytest.raises(ValueError):
        elliptic_klf(6, 1, Fraction(1, 24))
    with pytest.raises(ValueError):
        hyperbolic_klf_constants(6, 1, Fraction(-23, 24))
