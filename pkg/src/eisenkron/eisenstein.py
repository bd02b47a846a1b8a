"""Truncated evaluation of parabolic, hyperbolic and elliptic Eisenstein series for
Gamma_0(N), and of the unfolded lattice sum they assemble into.

Group sums run over explicit coset parametrizations:

* cusps 1/c: primitive rows (x, y) with gcd(x, N) = c, Im(sigma^-1 M z) = c Im z / (N |x z + y|^2);
* points: bottom rows (r, t) with N | r completed to M, then all translates T^k M;
* geodesics: the Gamma_0(N)-orbit of the form, enumerated inside the lattice and
  filtered by class.

Distances use plain hyperbolic geometry; the lattice sum uses the algebraic
majorant. Tails are estimated by comparing the partial sums at the bound and
at a quarter of it, with the known growth exponent of the term count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import mpmath
import numpy as np

from .qforms import BinaryQF, ClassList, GeodesicQF, HeegnerPoint, enumerate_classes, heegner_point
from .discgroup import DiscElement, Level

__all__ = [
    "CuspData",
    "TruncatedValue",
    "SingularPoint",
    "cusp_data",
    "parabolic_eisenstein",
    "hyperbolic_eisenstein",
    "elliptic_eisenstein",
    "lattice_vectors",
    "lattice_sum",
    "hyperbolic_distance",
    "lift_prefactor",
    "eisenstein_side",
]


class SingularPoint(ValueError):
    pass


@dataclass(frozen=True)
class CuspData:
    N: int
    c: int

    @property
    def width(self) -> int:
        return self.N // self.c

    @property
    def scaling_matrix(self):
        """sigma_{1/c} = sqrt(c/N) [[N/c, 1], [N, 1 + c]]."""
        r = math.sqrt(self.c / self.N)
        return ((r * self.N / self.c, r), (r * self.N, r * (1 + self.c)))


def cusp_data(N: int) -> list[CuspData]:
    return [CuspData(N, c) for c in Level(N).divisors]


@dataclass(frozen=True)
class TruncatedValue:
    value: float
    height_bound: float
    est_tail: float
    terms: int = 0


def _richardson_tail(full: float, quarter: float, alpha: float) -> float:
    """Tail of a sum whose remainder decays like bound^-alpha, from S(B) - S(B/4)."""
    r = 4.0**-alpha
    return abs(full - quarter) * r / (1 - r)


def _check_s(s):
    if s <= 1:
        raise ValueError("Eisenstein series need Re(s) > 1")


# ---------------------------------------------------------------------------
# distances


def hyperbolic_distance(z, target, method: str = "majorant"):
    """Distance from z to a point, or to the geodesic of an indefinite form.

    For geodesics, 'majorant' uses sinh d = |A|z|^2 + B x + C| / (y sqrt D) and
    'geometric' maps the endpoints to 0 and oo and measures the distance to the
    imaginary axis, cosh d = |w| / |Im w|.
    """
    z = mpmath.mpc(z)
    if isinstance(target, GeodesicQF):
        Q = target.form
        D = Q.disc
        if D <= 0:
            raise ValueError("geodesics need D > 0")
        if method == "majorant":
            return mpmath.asinh(abs(Q.value_at(z)) / (z.imag * mpmath.sqrt(D)))
        if method == "geometric":
            return mpmath.acosh(_cosh_to_geodesic(Q, z))
        raise ValueError(f"unknown method {method!r}")
    if isinstance(target, HeegnerPoint):
        target = target.z
    w = mpmath.mpc(target)
    return mpmath.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def _geodesic_endpoints(Q: BinaryQF):
    """Endpoints on R u {oo} of the geodesic A|z|^2 + B x + C = 0."""
    a, b, c = Q.coeffs()
    if a == 0:
        return (-mpmath.mpf(c) / b, mpmath.inf)
    r = mpmath.sqrt(Q.disc)
    return ((-b - r) / (2 * mpmath.mpf(a)), (-b + r) / (2 * mpmath.mpf(a)))


def _cosh_to_geodesic(Q: BinaryQF, z):
    r1, r2 = _geodesic_endpoints(Q)
    if r2 == mpmath.inf:
        w = z - r1
    else:
        w = (z - r1) / (z - r2)
    return abs(w) / abs(w.imag)


def _cosh_to_geodesic_float(ends, z: complex) -> float:
    r1, r2 = ends
    if r2 is None:
        w = z - r1
    else:
        w = (z - r1) / (z - r2)
    return abs(w) / abs(w.imag)


# ---------------------------------------------------------------------------
# parabolic


def parabolic_eisenstein(cusp: CuspData, z, s: float, bound: float = 2000.0) -> TruncatedValue:
    """E_{1/c}(z, s) = sum over Gamma_p \\ Gamma_0(N) of Im(sigma^-1 M z)^s, terms with Im >= 1/bound."""
    _check_s(s)
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    N, c = cusp.N, cusp.c
    x0, y = z.real, z.imag
    # Im = c y / (N |x z + y0|^2) >= 1/bound  <=>  |x z + y0|^2 <= c y bound / N
    H = c * y * bound / N
    total = 0.0
    quarter = 0.0
    count = 0
    xmax = int(math.sqrt(H) / y) + 1
    for x in range(0, xmax + 1):
        if gcd(x, N) != c:
            continue
        rest = H - (x * y) ** 2
        if rest < 0:
            continue
        span = math.sqrt(rest)
        lo, hi = math.ceil(-x * x0 - span), math.floor(-x * x0 + span)
        for y0 in range(lo, hi + 1):
            if x == 0 and y0 != 1:
                continue
            if gcd(x, y0) != 1:
                continue
            n2 = (x * x0 + y0) ** 2 + (x * y) ** 2
            im = c * y / (N * n2)
            term = im**s
            total += term
            count += 1
            if im >= 4.0 / bound:
                quarter += term
    return TruncatedValue(total, bound, _richardson_tail(total, quarter, s - 1), count)


# ---------------------------------------------------------------------------
# elliptic


def _gamma0_translates(N: int, z: complex, center: complex, cosh_bound: float):
    """Yield M z for M in Gamma_0(N)/{+-1} with cosh d(M z, center) <= cosh_bound."""
    y = z.imag
    vw = center.imag
    # cosh d >= vw / (2 v) forces v >= vw / (2 T), i.e. |r z + t|^2 <= 2 T y / vw
    H = 2 * cosh_bound * y / vw
    rmax = int(math.sqrt(H) / y) + 1
    for r in range(0, rmax + 1, N):
        rest = H - (r * y) ** 2
        if rest < 0:
            break
        span = math.sqrt(rest)
        lo, hi = math.ceil(-r * z.real - span), math.floor(-r * z.real + span)
        for t in range(lo, hi + 1):
            if r == 0 and t != 1:
                continue
            if gcd(r, t) != 1:
                continue
            if r == 0:
                w0 = z
            else:
                a = pow(t, -1, r) if r > 1 else 0
                b = (a * t - 1) // r
                w0 = (a * z + b) / (r * z + t)
            v = w0.imag
            # (u + k - uw)^2 <= 2 v vw (T - 1) - (v - vw)^2
            room = 2 * v * vw * (cosh_bound - 1) - (v - vw) ** 2
            if room < 0:
                continue
            span_k = math.sqrt(room)
            klo = math.ceil(center.real - w0.real - span_k)
            khi = math.floor(center.real - w0.real + span_k)
            for k in range(klo, khi + 1):
                yield w0 + k


def elliptic_eisenstein(point, z, s: float, N: int, stabilizer_order: int, bound: float = 200.0) -> TruncatedValue:
    """E^ell_w(z, s) = sum over Gamma_w \\ Gamma_0(N) of sinh(d(M z, w))^-s.

    Sums over all of Gamma_0(N)/{+-1} and divides by |Gamma_w / {+-1}| = stabilizer_order / 2.
    Terms with cosh d <= bound are kept.
    """
    _check_s(s)
    if isinstance(point, HeegnerPoint):
        point = point.z
    w = complex(point)
    z = complex(z)
    total = quarter = 0.0
    count = 0
    for mz in _gamma0_translates(N, z, w, bound):
        ch_minus_1 = abs(mz - w) ** 2 / (2 * mz.imag * w.imag)
        if ch_minus_1 < 1e-24:
            raise SingularPoint("z lies in the orbit of w")
        sinh2 = ch_minus_1 * (ch_minus_1 + 2)
        term = sinh2 ** (-s / 2)
        total += term
        count += 1
        if ch_minus_1 + 1 <= bound / 4:
            quarter += term
    weight = stabilizer_order / 2
    total /= weight
    quarter /= weight
    return TruncatedValue(total, bound, _richardson_tail(total, quarter, s - 1), count)


# ---------------------------------------------------------------------------
# lattice enumeration


def _majorant_gram(N: int, z: complex) -> np.ndarray:
    """Gram matrix in (A, B, C) of 2 Q(X_z) - Q(X) = (B^2 - 4AC)/4N + (A|z|^2 + Bx + C)^2 / (2 N y^2)."""
    x, y = z.real, z.imag
    r2 = x * x + y * y
    v = np.array([r2, x, 1.0])
    G = np.outer(v, v) / (2 * N * y * y)
    Q = np.array([[0, 0, -2.0], [0, 1.0, 0], [-2.0, 0, 0]]) / (4 * N)
    return G + Q


def lattice_vectors(N: int, beta: int, D: int, z, bound: float):
    """Forms [A, B, C] (N | A, B = beta mod 2N, B^2 - 4AC = D, not all zero) with Q(X_z) <= bound.

    Returns a list of ((A, B, C), Q(X_z)) with Q(X_z) = D/4N + (A|z|^2 + Bx + C)^2 / (4 N y^2).
    """
    z = complex(z)
    x, y = z.real, z.imag
    r2 = x * x + y * y
    m = D / (4 * N)
    R = 2 * bound - m
    if R < 0:
        return []
    Ginv = np.linalg.inv(_majorant_gram(N, z))
    Amax = math.sqrt(R * Ginv[0, 0]) + 1
    Bmax = math.sqrt(R * Ginv[1, 1]) + 1
    Cmax = math.sqrt(R * Ginv[2, 2]) + 1
    out = []
    beta %= 2 * N
    Bstart = -int(Bmax) - 2 * N
    Bstart += (beta - Bstart) % (2 * N)
    Bs = range(Bstart, int(Bmax) + 1, 2 * N)
    for A in range(-(int(Amax) // N) * N, int(Amax) + 1, N):
        for B in Bs:
            if A != 0:
                num = B * B - D
                if num % (4 * A):
                    continue
                cands = (num // (4 * A),)
            else:
                if B * B != D:
                    continue
                cands = range(-int(Cmax), int(Cmax) + 1)
            for C in cands:
                if A == 0 and B == 0 and C == 0:
                    continue
                val = A * r2 + B * x + C
                q = m + val * val / (4 * N * y * y)
                if q <= bound:
                    out.append(((A, B, C), q))
    return out


def lift_prefactor(s: float) -> float:
    """2 Gamma(s) / (4 pi)^s."""
    return 2 * math.gamma(s) / (4 * math.pi) ** s


def lattice_sum(N: int, beta: int, m, z, s: float, bound: float = 1e4) -> TruncatedValue:
    """(2 Gamma(s)/(4 pi)^s) sum_{X in L_{beta,m}, X != 0} Q(X_z)^-s over Q(X_z) <= bound."""
    m = Fraction(m)
    D = m * 4 * N
    if D.denominator != 1:
        raise ValueError("m is not in Z + Q(beta)")
    D = int(D)
    if (D - beta * beta) % (4 * N):
        raise ValueError("m is not in Z + Q(beta)")
    vecs = lattice_vectors(N, beta, D, z, bound)
    pref = lift_prefactor(s)
    total = quarter = 0.0
    for _, q in vecs:
        if q <= 0:
            raise SingularPoint("z is a Heegner point of index (beta, m)")
        term = q**-s
        total += term
        if q <= bound / 4:
            quarter += term
    total *= pref
    quarter *= pref
    # term count grows like bound^(1/2)
    return TruncatedValue(total, bound, _richardson_tail(total, quarter, s - 0.5), len(vecs))


# ---------------------------------------------------------------------------
# hyperbolic


def hyperbolic_eisenstein(geodesic: GeodesicQF, z, s: float, bound: float = 200.0, classes: ClassList | None = None) -> TruncatedValue:
    """E^hyp_c(z, s) = sum over Gamma_c \\ Gamma_0(N) of cosh(d(M z, c))^-s, terms with cosh d <= bound.

    Gamma_c \\ Gamma_0(N) is identified with the orbit of the form (forms Q.M with
    M^-1 c = c_{Q.M}); orbit members are found among lattice vectors of the same
    index and kept when their class matches.
    """
    _check_s(s)
    Q = geodesic.form
    N, D = Q.N, Q.disc
    if D <= 0:
        raise ValueError("geodesics need D > 0")
    if classes is None:
        classes = enumerate_classes(DiscElement(Level(N), Q.b), D)
    target = classes.classify(Q)
    z = complex(z)
    m = D / (4 * N)
    # cosh^2 d = Q(X_z)/m; slack keeps boundary vectors for the geometric test
    vecs = lattice_vectors(N, Q.b, D, z, m * bound * bound * 1.001 + 1e-9)
    total = quarter = 0.0
    count = 0
    for (A, B, C), _ in vecs:
        X = BinaryQF(A, B, C, N)
        if classes.classify(X) != target:
            continue
        ends = _endpoints_float(X)
        ch = _cosh_to_geodesic_float(ends, z)
        if ch > bound:
            continue
        term = ch**-s
        total += term
        count += 1
        if ch <= bound / 4:
            quarter += term
    return TruncatedValue(total, bound, _richardson_tail(total, quarter, s - 1), count)


def _endpoints_float(Q: BinaryQF):
    a, b, c = Q.coeffs()
    if a == 0:
        return (-c / b, None)
    r = math.sqrt(Q.disc)
    return ((-b - r) / (2 * a), (-b + r) / (2 * a))


# ---------------------------------------------------------------------------
# the Eisenstein side of the lift identity


def eisenstein_side(N: int, beta: int, m, z, s: float, bound: float = 200.0) -> TruncatedValue:
    """Eisenstein-series form of the lift at (beta, m), evaluated with E(z, 2s).

    m > 0: (2 Gamma(s)/(4 pi m)^s) sum over classes of E^hyp(z, 2s)
    m = 0: (4 N^s Gamma(s) zeta(2s) / pi^s) sum over cusps of E_p(z, 2s)
    m < 0: (2 Gamma(s)/(4 pi |m|)^s) sum over positive definite classes of beta and of -beta of E^ell(z, 2s)
    """
    m = Fraction(m)
    z = complex(z)
    if m == 0:
        if beta % (2 * N):
            raise ValueError("m = 0 requires beta = 0")
        pref = 4 * N**s * math.gamma(s) * float(mpmath.zeta(2 * s)) / math.pi**s
        parts = [parabolic_eisenstein(c, z, 2 * s, bound) for c in cusp_data(N)]
        return TruncatedValue(pref * sum(p.value for p in parts), bound, pref * sum(p.est_tail for p in parts), sum(p.terms for p in parts))
    D = int(m * 4 * N)
    pref = 2 * math.gamma(s) / (4 * math.pi * abs(float(m))) ** s
    parts = []
    if m > 0:
        cl = enumerate_classes(DiscElement(Level(N), beta), D)
        for rep in cl.reps:
            parts.append(hyperbolic_eisenstein(GeodesicQF(rep), z, 2 * s, bound, classes=cl))
    else:
        # X and -X are both counted: definite forms of index beta and of -beta, even when beta = -beta
        for b in (beta % (2 * N), (-beta) % (2 * N)):
            cl = enumerate_classes(DiscElement(Level(N), b), D)
            for fc in cl.classes:
                w = heegner_point(fc.rep).z
                parts.append(elliptic_eisenstein(complex(w), z, 2 * s, N, fc.stabilizer_order, bound))
    return TruncatedValue(pref * sum(p.value for p in parts), bound, pref * sum(p.est_tail for p in parts), sum(p.terms for p in parts))
