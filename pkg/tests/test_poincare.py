from fractions import Fraction

import mpmath
import pytest

from eisenkron.discgroup import atkin_lehner_table
from eisenkron.numtheory import divisors, is_squarefree
from eisenkron.poincare import (
    FourierCoefficientTable,
    ParameterRegime,
    PoincareIndex,
    laplacian_residual,
    poincare_direct,
    poincare_fourier,
    poincare_special_value,
    theta_d_coordinates,
    vq_poincare_identity_check,
)


def test_index_validation():
    with pytest.raises(ValueError):
        PoincareIndex(6, 1, Fraction(1, 12))
    with pytest.raises(ValueError):
        PoincareIndex(4, 0, 0)
    assert PoincareIndex.from_disc(6, 1, -23).m == Fraction(-23, 24)


def test_direct_against_fourier_matched_cutoff():
    # both routes truncated at |c| <= 30 see the same Kloosterman terms
    idx = PoincareIndex(1, 1, Fraction(-3, 4))
    direct = poincare_direct(idx, 1j, 1.5, c_bound=30, d_bound=2000)
    fourier, remainder = FourierCoefficientTable(idx, 1.5, n_max=6, j_cutoff=40, c_cutoff=30).evaluate(1j)
    scale = max(abs(direct.value))
    assert max(abs(direct.value - fourier)) / scale < 1e-6


@pytest.mark.parametrize("s", [0.75, 0.5 + 3j])
def test_regime_rejected(s):
    idx = PoincareIndex(1, 0, 0)
    with pytest.raises(ParameterRegime):
        poincare_direct(idx, 1j, s)
    with pytest.raises(ParameterRegime):
        FourierCoefficientTable(idx, s)


def test_explicit_route_only_for_zero_index():
    with pytest.raises(ParameterRegime):
        FourierCoefficientTable(PoincareIndex(6, 1, Fraction(1, 24)), 1.2, zeta_route="explicit")


@pytest.mark.parametrize("gamma, n", [(5, Fraction(25, 24)), (2, Fraction(1, 6)), (0, Fraction(-1))])
def test_fourier_coefficients_nearly_real(gamma, n):
    value, _ = poincare_fourier(PoincareIndex(6, 1, Fraction(1, 24)), 1.2, gamma, n, 1.0, c_cutoff=60)
    assert abs(value.imag) <= 1e-12 * abs(value.real)


def test_cusp_special_value_has_zero_constant_terms():
    val = poincare_special_value(PoincareIndex(6, 1, Fraction(1, 24)))
    assert val.kind == "cusp" and not val.is_zero
    f = val.expansion(4)
    # beta = 0 is the only class with Q(beta) integral at level 6
    assert f.coefficient(0, 0) == 0
    assert any(f.coeffs.values())


def test_coordinates_independent_of_involution_choice():
    seen = 0
    for N in (6, 10, 15, 30):
        for n in range(1, 40):
            for beta in range(2 * N):
                choices = [f for f in divisors(N) if atkin_lehner_table(N, f)[n % (2 * N)] == beta]
                if len(choices) < 2:
                    continue
                idx = PoincareIndex(N, beta, Fraction(n * n, 4 * N))
                values = [theta_d_coordinates(idx, f) for f in choices]
                assert all(v == values[0] for v in values)
                seen += 1
    assert seen > 0


def test_coordinates_reject_wrong_involution():
    idx = PoincareIndex(6, 1, Fraction(1, 24))
    with pytest.raises(ValueError):
        theta_d_coordinates(idx, 2)


@pytest.mark.parametrize("N", [1, 2, 6, 10, 30])
def test_zero_index_value(N):
    val = poincare_special_value(PoincareIndex(N, 0, 0))
    f = val.expansion(3)
    assert val.kind == "eisenstein"
    assert f.coefficient(0, 0) == 2
    for c in divisors(N):
        assert f.atkin_lehner(c) == f


def test_negative_index_is_characterized_only():
    val = poincare_special_value(PoincareIndex(6, 1, Fraction(-23, 24)))
    assert val.kind == "harmonic" and not val.holomorphic_coefficients_available
    assert val.principal_part == {(1, Fraction(-23, 24)): 1, (11, Fraction(-23, 24)): 1}
    with pytest.raises(ValueError):
        val.expansion()


def test_vq_trivial_q():
    check = vq_poincare_identity_check(6, 1, 5)
    assert check.ok and check.lhs == check.rhs


@pytest.mark.parametrize("N, q, n", [(30, 5, 5), (30, 3, 3), (6, 2, 2), (10, 5, 15)])
def test_vq_identity(N, q, n):
    assert is_squarefree(N)
    assert vq_poincare_identity_check(N, q, n, bound=20).ok


def test_laplacian_small_truncation():
    assert laplacian_residual(PoincareIndex(1, 1, Fraction(-3, 4)), 0.1 + 1.1j, 1.4, c_bound=20, d_bound=200) < 1e-3
