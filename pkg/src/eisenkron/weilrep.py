"""Weil representation of Mp_2(Z) on C[Z/2NZ], Kloosterman sums and zeta functions.

Metaplectic elements are pairs (M, sign) standing for (M, sign * sqrt(c tau + d))
with the principal square root. Two independent routes compute rho(M~):

* ``weil_apply`` multiplies generator images along a continued-fraction word
  (high precision, used as the reference);
* ``weil_column_fast`` evaluates a quadratic Gauss sum formula in double
  precision (vectorized, used for long Kloosterman zeta sums).

The fast route is checked against the word route in the test suite.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
import numpy as np

from .numtheory import factorize, fundamental_split, kronecker_symbol, valuation

__all__ = [
    "MetaplecticElement",
    "KloostermanTable",
    "kloosterman_table",
    "T_GEN",
    "S_GEN",
    "compose",
    "decompose",
    "word_product",
    "rho_T",
    "rho_S",
    "weil_apply",
    "weil_column_fast",
    "kloosterman_sum",
    "kloosterman_sum_dual",
    "KloostermanZetaTrunc",
    "kloosterman_zeta",
    "representation_count",
    "local_polynomial",
    "eisenstein_zeta_explicit",
    "OutsideConvergence",
]


class OutsideConvergence(ValueError):
    pass


@dataclass(frozen=True)
class MetaplecticElement:
    matrix: tuple[tuple[int, int], tuple[int, int]]
    sign: int = 1  # phi = sign * principal sqrt(c tau + d)

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        if a * d - b * c != 1:
            raise ValueError("matrix must have determinant 1")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    def phi(self, tau):
        (_, _), (c, d) = self.matrix
        return self.sign * mpmath.sqrt(c * tau + d)

    def act(self, tau):
        (a, b), (c, d) = self.matrix
        return (a * tau + b) / (c * tau + d)


T_GEN = MetaplecticElement(((1, 1), (0, 1)), 1)
S_GEN = MetaplecticElement(((0, -1), (1, 0)), 1)
_PROBE = mpmath.mpc("0.3141592653589793", "1.2718281828459045")


def compose(A: MetaplecticElement, B: MetaplecticElement) -> MetaplecticElement:
    """(M1, phi1)(M2, phi2) = (M1 M2, phi1(M2 tau) phi2(tau)); the sign is read off at a probe point."""
    (a, b), (c, d) = A.matrix
    (e, f), (g, h) = B.matrix
    M = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
    with mpmath.workdps(30):
        val = A.phi(B.act(_PROBE)) * B.phi(_PROBE)
        principal = mpmath.sqrt(M[1][0] * _PROBE + M[1][1])
        sign = 1 if abs(val - principal) < abs(val + principal) else -1
    return MetaplecticElement(M, sign)


def _power(G: MetaplecticElement, k: int) -> MetaplecticElement:
    out = MetaplecticElement(((1, 0), (0, 1)), 1)
    if k >= 0:
        for _ in range(k):
            out = compose(out, G)
        return out
    inv = _inverse(G)
    for _ in range(-k):
        out = compose(out, inv)
    return out


def _inverse(G: MetaplecticElement) -> MetaplecticElement:
    (a, b), (c, d) = G.matrix
    cand = MetaplecticElement(((d, -b), (-c, a)), 1)
    if compose(G, cand).sign != 1:
        cand = MetaplecticElement(cand.matrix, -1)
    return cand


def word_product(word) -> MetaplecticElement:
    """Product of a word [(letter, exponent), ...] with letters 'T' and 'S'."""
    out = MetaplecticElement(((1, 0), (0, 1)), 1)
    for letter, k in word:
        gen = T_GEN if letter == "T" else S_GEN
        out = compose(out, _power(gen, k))
    return out


def decompose(M: MetaplecticElement) -> list[tuple[str, int]]:
    """Word in (T, 1) and (S, sqrt tau) whose product is M, branch included.

    Continued fractions on the first column: M = T^q S M'' with |c''| < |c|.
    The leftover +-T^r is written as S^(0 or 2) T^r and the branch is fixed by
    a final central factor S^4 = (1, -1) when needed.
    """
    (a, b), (c, d) = M.matrix
    word: list[tuple[str, int]] = []
    while c != 0:
        q = a // c
        word.append(("T", q))
        word.append(("S", 1))
        a, b, c, d = c, d, -(a - q * c), -(b - q * d)
    # remaining matrix is [[a, b], [0, d]] with a = d = +-1
    if a == -1:
        word.append(("S", 2))
        r = -b
    else:
        r = b
    if r:
        word.append(("T", r))
    word = [(l, k) for l, k in word if k != 0]
    if word_product(word).sign != M.sign:
        word.append(("S", 4))
    return word


@lru_cache(maxsize=64)
def _rho_T_cached(N: int, dps: int):
    with mpmath.workdps(dps):
        return mpmath.diag([mpmath.expjpi(mpmath.mpf(b * b) / (2 * N)) for b in range(2 * N)])


@lru_cache(maxsize=64)
def _rho_S_cached(N: int, dps: int):
    with mpmath.workdps(dps):
        n = 2 * N
        pref = mpmath.expjpi(mpmath.mpf(-1) / 4) / mpmath.sqrt(n)
        # column beta holds the image of e_beta
        return mpmath.matrix([[pref * mpmath.expjpi(-mpmath.mpf(b * g) / N) for b in range(n)] for g in range(n)])


def rho_T(N: int):
    return _rho_T_cached(N, mpmath.mp.dps).copy()


def rho_S(N: int):
    return _rho_S_cached(N, mpmath.mp.dps).copy()


def _mat_power(A, k: int, n: int):
    if k < 0:
        A = A.H  # unitary
        k = -k
    out = mpmath.eye(n)
    for _ in range(k):
        out = out * A
    return out


def weil_apply(N: int, M: MetaplecticElement):
    """rho(M~) as a 2N x 2N mpmath matrix; column beta is rho(M~) e_beta."""
    n = 2 * N
    out = mpmath.eye(n)
    RT, RS = rho_T(N), rho_S(N)
    for letter, k in decompose(M):
        if letter == "T":
            # rho(T) is diagonal: raise entries to the k-th power directly
            D = mpmath.diag([RT[i, i] ** k for i in range(n)])
            out = out * D
        else:
            out = out * _mat_power(RS, k % 8, n)
    return out


def weil_column_fast(N: int, a: int, c: int, d: int, gamma: int) -> np.ndarray:
    """rho(M~) e_gamma in double precision for the canonical lift of [[a, *], [c, d]].

    For c > 0 the entries are e(-1/8)/sqrt(2Nc) * sum_{r mod c} e((a x^2 - 2 gamma x + d gamma^2)/(4Nc))
    with x = 2N r + delta. For c < 0, rho((M, sqrt)) = rho(Z)^3 rho(-M) with Z = (-1, i),
    and rho(Z)^3 e_beta = i e_{-beta}. For c = 0 the element is +-T^b.
    """
    n = 2 * N
    if c == 0:
        raise ValueError("use the diagonal formula for c = 0")
    if c < 0:
        col = weil_column_fast(N, -a, -c, -d, gamma)
        idx = (-np.arange(n)) % n
        return 1j * col[idx]
    mod = 4 * N * c
    x = 2 * N * np.arange(c, dtype=np.int64)[None, :] + np.arange(n, dtype=np.int64)[:, None]
    x %= mod
    # integer phases reduced mod 4Nc before converting to floats
    phase = (a * (x * x % mod) - 2 * gamma * x + d * gamma * gamma) % mod
    sums = np.exp(2j * np.pi * phase / mod).sum(axis=1)
    return cmath.exp(-2j * cmath.pi / 8) / np.sqrt(2 * N * c) * sums


def _completion(c: int, d: int) -> tuple[int, int]:
    """(a, b) with a d - b c = 1."""
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
    return a, (a * d - 1) // c


def kloosterman_sum(N: int, c: int, beta: int, m, gamma: int, n, method: str = "exact", dual: bool = False):
    """H_c(beta, m, gamma, n) of weight 1/2 (or H_c^* of weight 3/2 when dual=True).

    The summand is invariant under d -> d + c (the T-factor phase e(n) cancels
    against rho(T)), so any completion of each unit d gives the same value.
    """
    m, n = Fraction(m), Fraction(n)
    if c == 0:
        raise ValueError("c must be nonzero")
    k = Fraction(3, 2) if dual else Fraction(1, 2)
    sgn = 1 if c > 0 else -1
    total = mpmath.mpc(0) if method == "exact" else 0j
    ac = abs(c)
    for d in range(ac):
        if gcd(d, ac) != 1:
            continue
        a, b = _completion(c, d)
        if method == "exact":
            R = weil_apply(N, MetaplecticElement(((a, b), (c, d)), 1))
            entry = R[beta % (2 * N), gamma % (2 * N)]
            coef = entry if dual else mpmath.conj(entry)
            frac = (m * a + n * d) / c
            total += coef * mpmath.expjpi(2 * mpmath.mpf(frac.numerator) / frac.denominator)
        else:
            col = weil_column_fast(N, a, c, d, gamma % (2 * N))
            entry = col[beta % (2 * N)]
            coef = entry if dual else entry.conjugate()
            total += coef * cmath.exp(2j * cmath.pi * float((m * a + n * d) / c))
    if method == "exact":
        return mpmath.expjpi(-mpmath.mpf(sgn * k.numerator) / (2 * k.denominator)) / ac * total
    return cmath.exp(-2j * cmath.pi * float(sgn * k) / 4) / ac * total


def kloosterman_sum_dual(N: int, c: int, beta: int, m, gamma: int, n, method: str = "exact"):
    return kloosterman_sum(N, c, beta, m, gamma, n, method=method, dual=True)


@dataclass(frozen=True)
class KloostermanZetaTrunc:
    value: complex
    c_cutoff: int
    tail_bound: float


def _weil_entries(N: int, c: int, beta: int, units: np.ndarray, inverses: np.ndarray) -> np.ndarray:
    """(rho(M_d~) e_gamma)_beta for every unit d mod c (rows) and every gamma (columns)."""
    n = 2 * N
    if c < 0:
        # rho(Z)^3 rho(-M): entry beta picks up i and moves to -beta
        return 1j * _weil_entries(N, -c, (-beta) % n, (-units), (-inverses))
    mod = 4 * N * c
    x = (2 * N * np.arange(c, dtype=np.int64) + beta) % mod
    x2 = x * x % mod
    gam = np.arange(n, dtype=np.int64)
    g2 = gam * gam % mod
    a = (inverses % mod)[:, None, None]
    d = (units % mod)[:, None, None]
    phase = (a * x2[None, :, None] - 2 * gam[None, None, :] * x[None, :, None] + d * g2[None, None, :]) % mod
    sums = np.exp(2j * np.pi * phase / mod).sum(axis=1)
    return cmath.exp(-2j * cmath.pi / 8) / np.sqrt(2 * N * c) * sums


def _kloosterman_block(N: int, c: int, beta: int, m: Fraction, gamma_n: list[tuple[int, Fraction]]):
    """H_c(beta, m, gamma, n) for many (gamma, n) at once in double precision."""
    ac = abs(c)
    units = [d for d in range(ac) if gcd(d, ac) == 1]
    comp = [_completion(c, d) for d in units]
    inv = np.array([a for a, _ in comp], dtype=np.int64)
    dd = np.array(units, dtype=np.int64)
    entries = _weil_entries(N, c, beta, dd, inv).conj()
    gam = np.array([g for g, _ in gamma_n], dtype=np.int64)
    # e((m a + n d)/c) as an integer phase mod L|c|, L the common denominator
    L = m.denominator
    for _, nn in gamma_n:
        L = L * nn.denominator // gcd(L, nn.denominator)
    mod = L * ac
    sgn = 1 if c > 0 else -1
    mL = int(m * L) % mod
    nL = np.array([int(nn * L) % mod for _, nn in gamma_n], dtype=np.int64)
    ph = (sgn * (mL * (inv % mod)[None, :] + nL[:, None] * (dd % mod)[None, :])) % mod
    terms = entries[:, gam].T * np.exp(2j * np.pi * ph / mod)
    return cmath.exp(-2j * cmath.pi * sgn / 8) / ac * terms.sum(axis=1)


@dataclass(frozen=True)
class KloostermanTable:
    """H_c and H_{-c} for 1 <= c <= cutoff and a list of (gamma, n); reusable across s."""

    N: int
    beta: int
    m: Fraction
    pairs: tuple
    cutoff: int
    plus: np.ndarray  # shape (cutoff, len(pairs))
    minus: np.ndarray

    def zeta(self, s) -> list[KloostermanZetaTrunc]:
        s = complex(s)
        if s.real <= 1:
            raise OutsideConvergence("Kloosterman zeta needs Re(s) > 1")
        cs = np.arange(1, self.cutoff + 1, dtype=float)
        w = cs ** (1 - 2 * s)
        acc = (w[:, None] * (self.plus + self.minus)).sum(axis=0)
        tail = 2 * self.cutoff ** (2 - 2 * s.real) / (2 * s.real - 2)
        return [KloostermanZetaTrunc(complex(v), self.cutoff, tail) for v in acc]


def kloosterman_table(N: int, beta: int, m, pairs, cutoff: int = 200) -> KloostermanTable:
    m = Fraction(m)
    pairs = tuple((g % (2 * N), Fraction(v)) for g, v in pairs)
    for g, v in pairs:
        if (v - Fraction(g * g, 4 * N)).denominator != 1:
            raise ValueError(f"n = {v} is not in Z + Q({g})")
    plus = np.empty((cutoff, len(pairs)), dtype=complex)
    minus = np.empty((cutoff, len(pairs)), dtype=complex)
    b = beta % (2 * N)
    for c in range(1, cutoff + 1):
        plus[c - 1] = _kloosterman_block(N, c, b, m, list(pairs))
        minus[c - 1] = _kloosterman_block(N, -c, b, m, list(pairs))
    return KloostermanTable(N, b, m, pairs, cutoff, plus, minus)


def kloosterman_zeta(s, N: int, beta: int, m, gamma: int, n, cutoff: int = 200, many=None):
    """Partial sum of Z(s) = sum_{c != 0} |c|^(1-2s) H_c over 0 < |c| <= cutoff.

    |H_c| <= 1 because rho is unitary, so the tail is at most
    2 * cutoff^(2 - 2 Re s) / (2 Re s - 2).
    Pass ``many=[(gamma, n), ...]`` to evaluate several indices in one sweep.
    """
    s = complex(s)
    if s.real <= 1:
        raise OutsideConvergence("Kloosterman zeta needs Re(s) > 1")
    pairs = many if many is not None else [(gamma, n)]
    res = kloosterman_table(N, beta, m, pairs, cutoff).zeta(s)
    return res if many is not None else res[0]


# ---------------------------------------------------------------------------
# Closed form for the Eisenstein case (beta, m) = (0, 0)


def _order(gamma: int, N: int) -> int:
    M = 2 * N
    return M // gcd(M, gamma % M)


def representation_count(N: int, gamma: int, n, a: int) -> int:
    """#{x in L/aL : Q(x - gamma) - n = 0 mod a} for the level-N lattice L.

    For x = [[b, c/N], [-a', -b]] the value is N b^2 - b gamma + k0 - a' c with
    k0 = (gamma^2 - 4Nn)/4N an integer. Enumeration runs over b; the pairs
    (a', c) with a' c = t are counted in closed form for prime powers.
    """
    n = Fraction(n)
    k0 = Fraction(gamma * gamma, 4 * N) - n
    if k0.denominator != 1:
        raise ValueError("n is not in Z + Q(gamma)")
    k0 = int(k0)
    fac = factorize(a) if a > 1 else ()
    if len(fac) == 1:
        p, e = fac[0]
        count = lambda t: _product_count_prime_power(p, e, t)
    else:
        table = _product_counts(a)
        count = lambda t: table[t % a]
    return sum(count(N * b * b - b * gamma + k0) for b in range(a))


@lru_cache(maxsize=256)
def _product_counts(a: int) -> tuple[int, ...]:
    """#{(x, y) mod a : x y = t mod a} for each t, by brute force (small a only)."""
    counts = [0] * a
    for x in range(a):
        for y in range(a):
            counts[(x * y) % a] += 1
    return tuple(counts)


def _product_count_prime_power(p: int, e: int, t: int) -> int:
    """#{(x, y) mod p^e : x y = t}: x = p^i u has p^i solutions y when p^i | t."""
    q = p**e
    t %= q
    vt = e if t == 0 else valuation(t, p)
    total = q if t == 0 else 0
    for i in range(min(vt, e - 1) + 1):
        total += (p ** (e - i) - p ** (e - i - 1)) * p**i
    return total


def local_polynomial(N: int, gamma: int, n, p: int, X):
    """L^{(p)}(X) = dens(w) X^w + (1 - X) sum_{nu < w} dens(nu) X^nu, w = 1 + 2 v_p(2 ord(gamma) n).

    dens(nu) = N_{gamma,-n}(p^nu) / p^(2 nu) is the local density of the rank-3
    lattice; it is constant for nu >= w, which is why the series truncates.
    """
    n = Fraction(n)
    t = 2 * _order(gamma, N) * n
    w = 1 + 2 * valuation(int(t), p)
    dens = [Fraction(representation_count(N, gamma, n, p**nu), p ** (2 * nu)) for nu in range(w + 1)]
    head = _mp(dens[w]) * X**w
    body = sum(_mp(dens[nu]) * X**nu for nu in range(w))
    return head + (1 - X) * body


def _mp(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def eisenstein_zeta_explicit(s, N: int, gamma: int, n):
    """Z(1/4 + s; 0, 0, gamma, n) through zeta and Dirichlet L-values (Re s > 3/4)."""
    n = Fraction(n)
    s = mpmath.mpmathify(s)
    pref = mpmath.sqrt(2) / mpmath.sqrt(N)
    if n == 0:
        if gamma % (2 * N):
            raise ValueError("n = 0 forces gamma = 0 for squarefree N")
        val = mpmath.zeta(4 * s - 1) / mpmath.zeta(4 * s)
        for p, _ in factorize(N) if N > 1 else ():
            val *= (1 + mpmath.mpf(p) ** (1 - 2 * s)) / (1 + mpmath.mpf(p) ** (-2 * s))
        return pref * val
    o = _order(gamma, N)
    disc = 4 * N * o * o * n
    assert disc.denominator == 1
    disc = int(disc)
    split = fundamental_split(disc)
    D0, f = split.D0, split.f
    val = _dirichlet_L(D0, 2 * s) / mpmath.zeta(4 * s)
    for p, _ in factorize(f * f * D0):
        chi = kronecker_symbol(D0, p)
        X = mpmath.mpf(p) ** (-2 * s)
        # the density series runs in p^(1-2s); the first factor removes the generic Euler factor
        val *= (1 - chi * X) / (1 - X * X) * local_polynomial(N, gamma, n, p, p * X)
    return pref * val


def _dirichlet_L(D0: int, s):
    if D0 == 1:
        return mpmath.zeta(s)
    q = abs(D0)
    chi = [kronecker_symbol(D0, k) for k in range(q)]
    return mpmath.dirichlet(s, chi)
