"""Selberg-type vector-valued Poincare series of weight 1/2 for the Weil representation.

Two independent evaluations:

* ``poincare_direct`` sums the slashed seed v^s e(m tau) e_beta over bottom rows
  (c, d). Weil matrices come from the Gauss-sum formula once per unit d mod c;
  other d in the class follow from rho(M T^k) = rho(M) rho(T)^k.
* ``FourierCoefficientTable`` assembles the Fourier expansion from Kloosterman
  zeta values and Whittaker functions.

Special values at s = 0 are returned exactly in the basis theta_d of cusp forms
(m > 0), as the theta combination (m = 0), or as a characterization record (m < 0).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

import mpmath
import numpy as np

from .discgroup import Level, atkin_lehner_table, even_divisor_set
from .numtheory import divisor_sum, divisors, euler_phi, is_squarefree, moebius
from .qseries import (
    QExpansion,
    ThetaCombo,
    theta_combo_expansion,
    theta_d_norm,
    unary_theta,
    v_q_operator,
)
from .specfun import whittaker_w
from .weilrep import _completion, _weil_entries, eisenstein_zeta_explicit, kloosterman_table

__all__ = [
    "PoincareIndex",
    "DirectValue",
    "poincare_direct",
    "FourierCoefficientTable",
    "poincare_fourier",
    "SpecialValue",
    "poincare_special_value",
    "theta_d_coordinates",
    "vq_poincare_identity_check",
    "laplacian_residual",
]


class ParameterRegime(ValueError):
    pass


@dataclass(frozen=True)
class PoincareIndex:
    N: int
    beta: int
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "beta", self.beta % (2 * self.N))
        if not is_squarefree(self.N):
            raise ValueError("level must be squarefree")
        if (self.m - Fraction(self.beta**2, 4 * self.N)).denominator != 1:
            raise ValueError(f"m = {self.m} is not in Z + Q({self.beta})")

    @staticmethod
    def from_disc(N: int, beta: int, D: int) -> "PoincareIndex":
        return PoincareIndex(N, beta, Fraction(D, 4 * N))

    @property
    def disc(self) -> int:
        return int(self.m * 4 * self.N)


# ---------------------------------------------------------------------------
# direct coset sum


@dataclass(frozen=True)
class DirectValue:
    value: np.ndarray  # components e_0 .. e_{2N-1}
    c_bound: int
    d_bound: float
    est_tail: float


def _seed_terms(idx: PoincareIndex, row_index: int, c: int, tau: complex, s: complex, d_bound: float, rows_cache: dict, u_window=None):
    """Sum over d of the slashed seed for fixed c > 0 and Weil row `row_index`, window |c u + d| <= d_bound.

    u_window fixes the window centre (default Re tau) so nearby points share one coset set.
    """
    N = idx.N
    n = 2 * N
    u = tau.real if u_window is None else u_window
    v = tau.imag
    lo, hi = math.ceil(-c * u - d_bound), math.floor(-c * u + d_bound)
    d = np.arange(lo, hi + 1, dtype=np.int64)
    d = d[np.gcd(d, c) == 1]
    if d.size == 0:
        return np.zeros(n, dtype=complex)
    key = (c, row_index)
    if key not in rows_cache:
        units = np.array([r for r in range(c) if gcd(r, c) == 1], dtype=np.int64)
        inv = np.array([_completion(c, int(r))[0] for r in units], dtype=np.int64)
        entries = _weil_entries(N, c, row_index, units, inv).conj()  # conj((rho e_delta)_row)
        pos = np.full(c, -1, dtype=np.int64)
        pos[units] = np.arange(units.size)
        rows_cache[key] = (entries, pos, inv)
    entries, pos, inv = rows_cache[key]
    d0 = d % c
    k = (d - d0) // c
    slot = pos[d0]
    a = inv[slot]
    j = c * tau + d.astype(float)
    im = v / np.abs(j) ** 2
    mtau = a / c - 1.0 / (c * j)
    scal = j ** -0.5 * im**s * np.exp(2j * np.pi * float(idx.m) * mtau)
    delta = np.arange(n)
    # rho(T)^k on the row: e(-k delta^2 / 4N), integer phase mod 4N
    ph = (-(k[:, None] % (4 * N)) * (delta * delta)[None, :]) % (4 * N)
    mats = entries[slot] * np.exp(2j * np.pi * ph / (4 * N))
    return (scal[:, None] * mats).sum(axis=0)


def _direct_partial(idx: PoincareIndex, tau: complex, s: complex, c_bound: int, d_bound: float, upto: list[int], u_window=None):
    N = idx.N
    n = 2 * N
    v = tau.imag
    seed = v**s * cmath.exp(2j * math.pi * float(idx.m) * tau)
    total = np.zeros(n, dtype=complex)
    total[idx.beta] += seed
    total[(-idx.beta) % n] += seed
    rows_cache: dict = {}
    partial = {}
    for c in range(1, c_bound + 1):
        total += _seed_terms(idx, idx.beta, c, tau, s, d_bound, rows_cache, u_window)
        total += _seed_terms(idx, (-idx.beta) % n, c, tau, s, d_bound, rows_cache, u_window)
        if c in upto:
            partial[c] = total.copy()
    return total, partial


def poincare_direct(idx: PoincareIndex, tau, s, c_bound: int = 200, d_bound: float = 4000.0) -> DirectValue:
    """Truncated P_{beta,m}(tau, s): bottom rows 0 < c <= c_bound, |c u + d| <= d_bound, plus c = 0.

    The (-c, -d) rows equal the (c, d) rows of index -beta, so only c >= 0 is enumerated.
    """
    s = complex(s)
    if s.real <= 0.75:
        raise ParameterRegime("the coset sum needs Re(s) > 3/4")
    tau = complex(tau)
    half = max(1, c_bound // 2)
    total, partial = _direct_partial(idx, tau, s, c_bound, d_bound, [half])
    # remainder over c decays like c_bound^(1 - 2s); the d-window remainder is bounded termwise
    alpha = 2 * s.real - 1
    r = 2.0**-alpha
    c_tail = float(np.max(np.abs(total - partial[half]))) * r / (1 - r) if c_bound > 1 else 0.0
    d_tail = 2 * c_bound * 2 * d_bound ** (0.5 - 2 * s.real) / (2 * s.real - 0.5)
    return DirectValue(total, c_bound, d_bound, c_tail + d_tail)


# ---------------------------------------------------------------------------
# Fourier expansion


def _pairs_up_to(N: int, n_max) -> list[tuple[int, Fraction]]:
    out = []
    for g in range(2 * N):
        q = Fraction(g * g, 4 * N)
        q -= q.numerator // q.denominator
        k_lo = math.floor(-n_max - q)
        for k in range(k_lo, int(n_max) + 2):
            nn = q + k
            if nn != 0 and abs(nn) <= n_max:
                out.append((g, nn))
    return out


@dataclass
class FourierCoefficientTable:
    """Fourier coefficients b(gamma, n; v, s) with cached Kloosterman zeta truncations.

    zeta_route='direct' sums Z(1/4 + s + j) over |c| <= c_cutoff; 'explicit' uses the
    zeta/L-function closed form and is only available for (beta, m) = (0, 0).
    """

    idx: PoincareIndex
    s: complex
    n_max: Fraction = Fraction(15)
    j_cutoff: int = 60
    c_cutoff: int = 200
    zeta_route: str = "direct"
    j_tol: float = 1e-22
    _zcache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.s = mpmath.mpmathify(self.s)
        self.n_max = Fraction(self.n_max)
        if mpmath.re(self.s) <= 0.75:
            raise ParameterRegime("the Fourier expansion is used for Re(s) > 3/4")
        if self.zeta_route == "explicit" and (self.idx.beta, self.idx.m) != (0, 0):
            raise ParameterRegime("closed-form zeta values exist only for (beta, m) = (0, 0)")
        if self.zeta_route not in ("direct", "explicit"):
            raise ValueError(f"unknown zeta route {self.zeta_route!r}")

    @cached_property
    def pairs(self) -> list[tuple[int, Fraction]]:
        return [(0, Fraction(0))] + _pairs_up_to(self.idx.N, self.n_max)

    @cached_property
    def _table(self):
        return kloosterman_table(self.idx.N, self.idx.beta, self.idx.m, self.pairs, self.c_cutoff)

    def zeta(self, gamma: int, n, j: int):
        """Z(1/4 + s + j; beta, m, gamma, n) and its truncation bound."""
        key = (gamma % (2 * self.idx.N), Fraction(n))
        if self.zeta_route == "explicit":
            if j:
                raise ParameterRegime("only j = 0 enters when m = 0")
            if (key, j) not in self._zcache:
                self._zcache[(key, j)] = (eisenstein_zeta_explicit(self.s, self.idx.N, key[0], key[1]), 0.0)
            return self._zcache[(key, j)]
        if j not in self._zcache:
            vals = self._table.zeta(complex(mpmath.mpf(1) / 4 + self.s + j))
            self._zcache[j] = {p: (mpmath.mpc(z.value), z.tail_bound) for p, z in zip(self.pairs, vals)}
        return self._zcache[j][key]

    def _j_range(self):
        return range(0, 1 if self.idx.m == 0 else self.j_cutoff + 1)

    def coefficient(self, gamma: int, n, v) -> tuple:
        """(b(gamma, n; v, s), remainder estimate) as mpmath numbers."""
        gamma %= 2 * self.idx.N
        n = Fraction(n)
        s = self.s
        v = mpmath.mpf(v)
        m = self.idx.m
        mf = mpmath.mpf(m.numerator) / m.denominator
        total = mpmath.mpc(0)
        ztail = 0.0
        last = mpmath.mpf(0)
        if n == 0:
            if gamma != 0:
                return mpmath.mpc(0), 0.0
            pref = 2 ** (mpmath.mpf(3) / 2 - 2 * s) * mpmath.pi * v ** (mpmath.mpf(1) / 2 - s) / mpmath.gamma(s)
            for j in self._j_range():
                z, tb = self.zeta(0, 0, j)
                w = (-mpmath.pi * mf / v) ** j / mpmath.factorial(j) * mpmath.gamma(2 * s - mpmath.mpf(1) / 2 + j) / mpmath.gamma(s + mpmath.mpf(1) / 2 + j)
                last = abs(pref * w * z)
                total += pref * w * z
                ztail += float(abs(pref * w)) * tb
                if j > 2 and last < self.j_tol * abs(total):
                    break
            return total, ztail + (float(last) if self.idx.m != 0 else 0.0)
        an = abs(mpmath.mpf(n.numerator) / n.denominator)
        x = 4 * mpmath.pi * an * v
        pref = mpmath.sqrt(2) * mpmath.pi ** (s + mpmath.mpf(1) / 2) * an ** (s - mpmath.mpf(1) / 2)
        quarter = mpmath.mpf(1) / 4
        for j in self._j_range():
            z, tb = self.zeta(gamma, n, j)
            if n > 0:
                wh = whittaker_w(quarter + mpmath.mpf(j) / 2, s - quarter + mpmath.mpf(j) / 2, x) / mpmath.gamma(s + mpmath.mpf(1) / 2 + j)
            else:
                wh = whittaker_w(-quarter - mpmath.mpf(j) / 2, s - quarter + mpmath.mpf(j) / 2, x) / mpmath.gamma(s)
            w = (-4 * mpmath.pi**2 * an * mf) ** j / mpmath.factorial(j) * x ** (-quarter - mpmath.mpf(j) / 2) * wh
            last = abs(pref * w * z)
            total += pref * w * z
            ztail += float(abs(pref * w)) * tb
            if j > 2 and last < self.j_tol * abs(total):
                break
        return total, ztail + (float(last) if self.idx.m != 0 else 0.0)

    def evaluate(self, tau) -> tuple[np.ndarray, float]:
        """Partial Fourier sum over |n| <= n_max; returns (vector, summed remainder estimate)."""
        tau = mpmath.mpc(tau)
        u, v = tau.real, tau.imag
        N = self.idx.N
        out = [mpmath.mpc(0)] * (2 * N)
        seed = v**self.s * mpmath.exp(2j * mpmath.pi * mpmath.mpf(self.idx.m.numerator) / self.idx.m.denominator * tau)
        out[self.idx.beta] += seed
        out[(-self.idx.beta) % (2 * N)] += seed
        err = 0.0
        for g, nn in self.pairs:
            b, e = self.coefficient(g, nn, v)
            phase = mpmath.expjpi(2 * mpmath.mpf(nn.numerator) / nn.denominator * u)
            out[g] += b * phase
            err += e
        return np.array([complex(z) for z in out]), err


def poincare_fourier(idx: PoincareIndex, s, gamma: int, n, v, J_cutoff: int = 60, c_cutoff: int = 200, zeta_route: str = "direct"):
    """Single Fourier coefficient b(gamma, n; v, s) with its remainder estimate."""
    n = Fraction(n)
    table = FourierCoefficientTable(idx, s, n_max=max(abs(n), Fraction(1)), j_cutoff=J_cutoff, c_cutoff=c_cutoff, zeta_route=zeta_route)
    return table.coefficient(gamma, n, v)


# ---------------------------------------------------------------------------
# special values at s = 0


@dataclass(frozen=True)
class SpecialValue:
    idx: PoincareIndex
    kind: str  # 'eisenstein', 'cusp', 'harmonic'
    combo: ThetaCombo | None
    theta_d: dict  # d -> lambda_d (cusp case)
    principal_part: dict  # (beta, m) -> coefficient
    orthogonal_to_cusp_forms: bool | None = None
    xi_image_cuspidal: bool | None = None
    holomorphic_coefficients_available: bool = True

    def expansion(self, bound=10) -> QExpansion:
        if self.combo is None:
            raise ValueError("holomorphic coefficients are not available for m < 0")
        return theta_combo_expansion(self.combo, bound)

    @property
    def is_zero(self) -> bool:
        return self.combo is not None and not self.combo.coeffs


def _atkin_lehner_divisor(N: int, n: int, beta: int) -> int:
    """Smallest f | N with w_f(n) = beta (mod 2N)."""
    for f in divisors(N):
        if atkin_lehner_table(N, f)[n % (2 * N)] == beta % (2 * N):
            return f
    raise ValueError("no Atkin-Lehner involution maps n to beta")


def theta_d_coordinates(idx: PoincareIndex, f: int | None = None) -> dict[int, Fraction]:
    """lambda_d = (P_{beta,m}, theta_d)/(theta_d, theta_d) for d in E(N) minus {1}, m > 0.

    (P, theta_d) = -(4 pi n / sqrt N) mu((f,d)) sum_{c | N} mu((c,d)) c_{theta^{w_c}}(n, n^2/4N),
    with 4Nm = n^2 and w_f(n) = beta; zero when 4Nm is not a square.
    """
    N = idx.N
    if idx.m <= 0:
        raise ValueError("theta_d coordinates describe m > 0")
    D = idx.disc
    n = isqrt(D)
    ds = [d for d in even_divisor_set(Level(N)) if d != 1]
    if n * n != D:
        return {d: Fraction(0) for d in ds}
    if f is None:
        f = _atkin_lehner_divisor(N, n, idx.beta)
    elif atkin_lehner_table(N, f)[n % (2 * N)] != idx.beta:
        raise ValueError(f"w_{f} does not map {n} to {idx.beta}")
    index = Fraction(n * n, 4 * N)
    coeff = {c: unary_theta(N, c, index + 1).coefficient(n % (2 * N), index) for c in divisors(N)}
    out = {}
    for d in ds:
        char_sum = sum(moebius(gcd(c, d)) * coeff[c] for c in divisors(N))
        pairing = Fraction(-4 * n) * moebius(gcd(f, d)) * char_sum  # in units of pi / sqrt N
        out[d] = pairing / theta_d_norm(N, d).coef
    return out


def poincare_special_value(idx: PoincareIndex) -> SpecialValue:
    N = idx.N
    pp = {}
    if idx.m <= 0:
        pp[(idx.beta, idx.m)] = pp.get((idx.beta, idx.m), 0) + 1
        pp[((-idx.beta) % (2 * N), idx.m)] = pp.get(((-idx.beta) % (2 * N), idx.m), 0) + 1
    if idx.m == 0:
        if idx.beta != 0:
            raise ValueError("m = 0 forces beta = 0 for squarefree N")
        combo = ThetaCombo.of(N, {c: Fraction(2, len(divisors(N))) for c in divisors(N)})
        return SpecialValue(idx, "eisenstein", combo, {}, pp)
    if idx.m > 0:
        lam = theta_d_coordinates(idx)
        combo = ThetaCombo.of(N, {})
        for d, val in lam.items():
            combo = combo + ThetaCombo.theta_d(N, d).scale(val)
        return SpecialValue(idx, "cusp", combo, lam, pp)
    return SpecialValue(idx, "harmonic", None, {}, pp, orthogonal_to_cusp_forms=True, xi_image_cuspidal=True, holomorphic_coefficients_available=False)


@dataclass(frozen=True)
class VqCheck:
    ok: bool
    max_deviation: Fraction
    lhs: dict
    rhs: dict


def vq_poincare_identity_check(N: int, q: int, n: int, beta: int | None = None, bound: int = 60) -> VqCheck:
    """P^N_{beta, n^2/4N} = q/sigma_1(q) * P^{N/q}_{beta/q, (n/q)^2/(4N/q)} | V_q, compared in theta_d coordinates
    and, as a second check, coefficientwise up to `bound`."""
    if not (is_squarefree(N) and N % q == 0 and gcd(n, N) == q):
        raise ValueError("need squarefree N, q | N and q = (n, N)")
    if beta is None:
        beta = n % (2 * N)
    if beta % q:
        raise ValueError("beta must be divisible by q")
    M = N // q
    big = PoincareIndex(N, beta, Fraction(n * n, 4 * N))
    small = PoincareIndex(M, (beta // q) % (2 * M), Fraction((n // q) ** 2, 4 * M))
    lhs = theta_d_coordinates(big)
    factor = Fraction(q, divisor_sum(q, 1))
    small_coords = theta_d_coordinates(small) if M > 1 else {}
    # theta_d^{N/q} | V_q = theta_d^N for d in E(N/q)
    rhs = {d: Fraction(0) for d in lhs}
    for d, val in small_coords.items():
        rhs[d] = factor * val
    dev = max((abs(lhs[d] - rhs[d]) for d in lhs), default=Fraction(0))
    # coefficientwise: expand the small-level value, apply V_q, compare
    left_exp = poincare_special_value(big).expansion(bound)
    small_val = poincare_special_value(small)
    right_exp = v_q_operator(small_val.expansion(bound * q), q, N).scale(factor)
    ok = dev == 0 and left_exp == right_exp
    return VqCheck(ok, dev, lhs, rhs)


# ---------------------------------------------------------------------------
# differential equation


def laplacian_residual(idx: PoincareIndex, tau, s, h: float = 1e-3, c_bound: int = 60, d_bound: float = 600.0) -> float:
    """Relative residual of Delta_{1/2} P = s(1/2 - s) P + 4 pi m s P(s+1), derivatives by central differences.

    The same finite set of cosets is used at every stencil point, so each side is the
    truncated series with identical support.
    """
    tau = complex(tau)
    s = complex(s)

    def P(t, ss):
        return _direct_partial(idx, t, ss, c_bound, d_bound, [], u_window=tau.real)[0]

    f0 = P(tau, s)
    fu = (P(tau + h, s), P(tau - h, s))
    fv = (P(tau + 1j * h, s), P(tau - 1j * h, s))
    v = tau.imag
    d2u = (fu[0] - 2 * f0 + fu[1]) / h**2
    d2v = (fv[0] - 2 * f0 + fv[1]) / h**2
    du = (fu[0] - fu[1]) / (2 * h)
    dv = (fv[0] - fv[1]) / (2 * h)
    k = 0.5
    lap = -(v**2) * (d2u + d2v) + 1j * k * v * (du + 1j * dv)
    rhs = s * (0.5 - s) * f0 + 4 * math.pi * float(idx.m) * s * P(tau, s + 1)
    return float(np.max(np.abs(lap - rhs)) / np.max(np.abs(rhs)))
