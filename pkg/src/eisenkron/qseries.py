"""Exact q-expansions: scalar series, vector-valued expansions on Z/2NZ, eta products,
unary theta functions, the operator V_q, closed-form theta inner products,
Borcherds products of theta combinations, and Fricke Hauptmoduln.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

from .discgroup import Level, atkin_lehner_table, star
from .numtheory import divisor_sum, divisors, euler_phi, moebius

__all__ = [
    "QSeries",
    "QExpansion",
    "EtaQuotient",
    "ThetaCombo",
    "ClosedInnerProduct",
    "BorcherdsProductData",
    "UnsupportedInput",
    "eta_expansion",
    "eta_product",
    "unary_theta",
    "theta_d",
    "theta_combo_expansion",
    "inner_product_closed",
    "weyl_vector",
    "borcherds_product",
    "v_q_operator",
    "hauptmodul",
    "GENUS_ZERO_FRICKE_PRIMES",
]


class UnsupportedInput(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalar series


@dataclass(frozen=True)
class QSeries:
    """sum_k coeffs[k] q^(offset + k), known for exponents < offset + len(coeffs)."""

    offset: Fraction
    coeffs: tuple

    @staticmethod
    def make(offset, coeffs: Iterable) -> "QSeries":
        return QSeries(Fraction(offset), tuple(Fraction(c) for c in coeffs))

    @property
    def precision(self) -> Fraction:
        """Exponent bound: the series is exact below offset + len(coeffs)."""
        return self.offset + len(self.coeffs)

    def __getitem__(self, exponent) -> Fraction:
        k = Fraction(exponent) - self.offset
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        if k >= len(self.coeffs):
            raise IndexError(f"exponent {exponent} beyond precision {self.precision}")
        return self.coeffs[int(k)]

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return QSeries(self.offset + other.offset, tuple(out))

    def scale(self, c) -> "QSeries":
        return QSeries(self.offset, tuple(Fraction(c) * x for x in self.coeffs))

    def __add__(self, other: "QSeries") -> "QSeries":
        d = other.offset - self.offset
        if d.denominator != 1:
            raise ValueError("offsets differ by a non-integer")
        lo = min(self.offset, other.offset)
        hi = min(self.precision, other.precision)
        n = int(hi - lo)
        out = []
        for k in range(n):
            e = lo + k
            a = self[e] if e >= self.offset else Fraction(0)
            b = other[e] if e >= other.offset else Fraction(0)
            out.append(a + b)
        return QSeries(lo, tuple(out))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def rescale(self, c: int) -> "QSeries":
        """f(cz): exponent e goes to c e."""
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for k in range(0, (n + c - 1) // c):
            out[k * c] = self.coeffs[k]
        return QSeries(self.offset * c, tuple(out))

    def truncate(self, n_terms: int) -> "QSeries":
        return QSeries(self.offset, self.coeffs[:n_terms])

    def strip(self) -> "QSeries":
        """Drop leading zero coefficients, moving the offset up."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        return QSeries(self.offset + k, self.coeffs[k:])

    def inverse(self) -> "QSeries":
        """1/f; leading zeros are stripped first (costing precision)."""
        self = self.strip()
        if not self.coeffs:
            raise ZeroDivisionError("series is zero to working precision")
        a0 = self.coeffs[0]
        if a0 == 0:
            raise ZeroDivisionError("leading coefficient is zero")
        n = len(self.coeffs)
        inv = [Fraction(0)] * n
        inv[0] = 1 / a0
        for k in range(1, n):
            acc = sum(self.coeffs[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -acc / a0
        return QSeries(-self.offset, tuple(inv))

    def power(self, r) -> "QSeries":
        """f^r for rational r, with leading coefficient 1 when r is not an integer."""
        r = Fraction(r)
        if r.denominator == 1:
            k = int(r)
            base = self if k >= 0 else self.inverse()
            out = QSeries(Fraction(0), (Fraction(1),) + (Fraction(0),) * (len(self.coeffs) - 1))
            for _ in range(abs(k)):
                out = out * base
            return out
        if self.coeffs[0] != 1:
            raise UnsupportedInput("fractional power needs leading coefficient 1")
        # J. C. P. Miller recurrence for (1 + g)^r
        a = self.coeffs
        n = len(a)
        b = [Fraction(0)] * n
        b[0] = Fraction(1)
        for k in range(1, n):
            b[k] = sum(((r + 1) * j - k) * a[j] * b[k - j] for j in range(1, k + 1)) / k
        return QSeries(self.offset * r, tuple(b))


def eta_expansion(order: int) -> QSeries:
    """q^(1/24) prod (1 - q^n), exact below q^(1/24 + order), by the pentagonal number theorem."""
    if order < 1:
        raise ValueError("order must be positive")
    coeffs = [0] * order
    k = 0
    while True:
        done = True
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < order:
                coeffs[e] += -1 if kk % 2 else 1
                done = False
        if done and k > 0:
            break
        k += 1
    return QSeries.make(Fraction(1, 24), coeffs)


@dataclass(frozen=True)
class EtaQuotient:
    exponents: Mapping[int, Fraction]

    @property
    def leading_power(self) -> Fraction:
        return sum((d * Fraction(r) for d, r in self.exponents.items()), Fraction(0)) / 24

    @property
    def weight(self) -> Fraction:
        return sum((Fraction(r) for r in self.exponents.values()), Fraction(0)) / 2

    def expansion(self, order: int) -> QSeries:
        return eta_product(self.exponents, order)


def eta_product(exponents: Mapping[int, Fraction], order: int) -> QSeries:
    """prod_d eta(d z)^(r_d), exact for `order` integer steps above the leading power."""
    base = eta_expansion(order)
    unit = QSeries(Fraction(0), base.coeffs)  # prod (1 - q^n) without the q^(1/24)
    out = QSeries(Fraction(0), (Fraction(1),) + (Fraction(0),) * (order - 1))
    lead = Fraction(0)
    for d, r in sorted(exponents.items()):
        r = Fraction(r)
        if r == 0:
            continue
        out = out * unit.rescale(d).power(r)
        lead += d * r / 24
    return QSeries(lead, out.coeffs)


# ---------------------------------------------------------------------------
# vector-valued expansions


def _key(N: int, beta: int, n) -> tuple[int, Fraction]:
    beta %= 2 * N
    n = Fraction(n)
    if (n - Fraction(beta * beta, 4 * N)).denominator != 1:
        raise ValueError(f"index ({beta}, {n}) violates n = beta^2/4N mod 1")
    return beta, n


@dataclass(frozen=True)
class QExpansion:
    """Holomorphic q-expansion sum c(beta, n) q^n e_beta on Z/2NZ, exact for n <= order_bound."""

    level: Level
    coeffs: Mapping[tuple[int, Fraction], object]
    order_bound: Fraction
    weight_tag: Fraction = Fraction(1, 2)
    _frozen: tuple = field(default=(), compare=False, repr=False)

    @staticmethod
    def build(N: int, entries: Mapping, order_bound, weight_tag=Fraction(1, 2)) -> "QExpansion":
        clean = {}
        for (b, n), v in entries.items():
            k = _key(N, b, n)
            if v != 0 and k[1] <= order_bound:
                clean[k] = v
        return QExpansion(Level(N), clean, Fraction(order_bound), Fraction(weight_tag))

    @property
    def N(self) -> int:
        return self.level.N

    def coefficient(self, beta: int, n) -> object:
        k = _key(self.N, beta, n)
        if k[1] > self.order_bound:
            raise IndexError(f"index {n} beyond order bound {self.order_bound}")
        return self.coeffs.get(k, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self.N == other.N and self.order_bound == other.order_bound and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.N, self.order_bound, frozenset(self.coeffs.items())))

    def __add__(self, other: "QExpansion") -> "QExpansion":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        bound = min(self.order_bound, other.order_bound)
        return QExpansion.build(self.N, out, bound, self.weight_tag)

    def scale(self, c) -> "QExpansion":
        return QExpansion.build(self.N, {k: c * v for k, v in self.coeffs.items()}, self.order_bound, self.weight_tag)

    def __sub__(self, other):
        return self + other.scale(-1)

    def atkin_lehner(self, c: int) -> "QExpansion":
        """f^{w_c} = sum_beta f_beta e_{w_c(beta)}."""
        w = atkin_lehner_table(self.N, c)
        return QExpansion.build(self.N, {(w[b], n): v for (b, n), v in self.coeffs.items()}, self.order_bound, self.weight_tag)

    def _check(self, other):
        if self.N != other.N:
            raise ValueError("level mismatch")

    def to_json(self) -> str:
        rows = []
        for (b, n), v in sorted(self.coeffs.items()):
            num = n * 4 * self.N
            val = f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else (str(v) if isinstance(v, int) else repr(float(v)))
            rows.append([b, int(num), 4 * self.N, val])
        return json.dumps({"level": self.N, "weight_tag": str(self.weight_tag), "order_bound": str(self.order_bound), "coeffs": rows})

    @staticmethod
    def from_json(text: str) -> "QExpansion":
        data = json.loads(text)
        entries = {}
        for b, num, den, val in data["coeffs"]:
            entries[(b, Fraction(num, den))] = Fraction(val)
        return QExpansion.build(data["level"], entries, Fraction(data["order_bound"]), Fraction(data["weight_tag"]))


def unary_theta(N: int, c: int = 1, bound=10) -> QExpansion:
    """theta^{w_c} with theta = sum_{x in Z} q^(x^2/4N) e_{x mod 2N}, exact for n <= bound."""
    if N % c:
        raise ValueError(f"{c} does not divide {N}")
    bound = Fraction(bound)
    entries: dict = {}
    x = 0
    while Fraction(x * x, 4 * N) <= bound:
        for y in ((x,) if x == 0 else (x, -x)):
            k = (y % (2 * N), Fraction(x * x, 4 * N))
            entries[k] = entries.get(k, 0) + 1
        x += 1
    theta = QExpansion.build(N, {k: Fraction(v) for k, v in entries.items()}, bound)
    return theta if c == 1 else theta.atkin_lehner(c)


def theta_d(N: int, d: int, bound=10) -> QExpansion:
    """theta_d = sum_{c | N} mu((c, d)) theta^{w_c} for d in E(N)."""
    if N % d or moebius(d) != 1:
        raise ValueError(f"{d} is not in E({N})")
    return theta_combo_expansion(ThetaCombo.theta_d(N, d), bound)


@dataclass(frozen=True)
class ThetaCombo:
    """Linear combination sum_c a_c theta^{w_c} with rational coefficients."""

    N: int
    coeffs: Mapping[int, Fraction]

    @staticmethod
    def of(N: int, coeffs: Mapping[int, object]) -> "ThetaCombo":
        for c in coeffs:
            if N % c:
                raise ValueError(f"{c} does not divide {N}")
        return ThetaCombo(N, {c: Fraction(v) for c, v in coeffs.items() if v != 0})

    @staticmethod
    def theta_d(N: int, d: int) -> "ThetaCombo":
        return ThetaCombo.of(N, {c: moebius(gcd(c, d)) for c in divisors(N)})

    def __add__(self, other: "ThetaCombo") -> "ThetaCombo":
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            out[c] = out.get(c, 0) + v
        return ThetaCombo.of(self.N, out)

    def scale(self, r) -> "ThetaCombo":
        return ThetaCombo.of(self.N, {c: Fraction(r) * v for c, v in self.coeffs.items()})

    def atkin_lehner(self, f: int) -> "ThetaCombo":
        # (theta^{w_c})^{w_f} = theta^{w_{c*f}}
        return ThetaCombo.of(self.N, {star(c, f): v for c, v in self.coeffs.items()})


def theta_combo_expansion(combo: ThetaCombo, bound=10) -> QExpansion:
    out = None
    for c, v in sorted(combo.coeffs.items()):
        term = unary_theta(combo.N, c, bound).scale(v)
        out = term if out is None else out + term
    if out is None:
        return QExpansion.build(combo.N, {}, Fraction(bound))
    return out


@dataclass(frozen=True)
class ClosedInnerProduct:
    """The real number coef * pi / sqrt(N)."""

    coef: Fraction
    N: int

    def __float__(self) -> float:
        import math

        return float(self.coef) * math.pi / math.sqrt(self.N)

    def mp(self):
        import mpmath

        return mpmath.mpf(self.coef.numerator) / self.coef.denominator * mpmath.pi / mpmath.sqrt(self.N)


def _theta_pair(N: int, a: int, b: int) -> Fraction:
    # (theta^{w_a}, theta^{w_b}) = (theta^{w_{a*b}}, theta) = (pi / 3 sqrt N) (c + N/c) with c = a*b
    c = star(a, b)
    return Fraction(c + N // c, 3)


def inner_product_closed(f: ThetaCombo, g: ThetaCombo) -> ClosedInnerProduct:
    """Petersson product of two theta combinations, bilinear over (theta^{w_a}, theta^{w_b})."""
    if f.N != g.N:
        raise ValueError("level mismatch")
    total = Fraction(0)
    for a, x in f.coeffs.items():
        for b, y in g.coeffs.items():
            total += x * y * _theta_pair(f.N, a, b)
    return ClosedInnerProduct(total, f.N)


def theta_d_norm(N: int, d: int) -> ClosedInnerProduct:
    """2 pi sigma_0(N) sigma_1(N/d) phi(d) / (3 sqrt N)."""
    return ClosedInnerProduct(Fraction(2 * len(divisors(N)) * divisor_sum(N // d) * euler_phi(d), 3), N)


def weyl_vector(f: ThetaCombo, c: int = 1) -> Fraction:
    """rho_{f,1/c} = (sqrt N / 8 pi) (f, theta^{w_c})."""
    if f.N % c:
        raise ValueError(f"{c} does not divide {f.N}")
    return inner_product_closed(f, ThetaCombo.of(f.N, {c: 1})).coef / 8


# ---------------------------------------------------------------------------
# Borcherds products


@dataclass(frozen=True)
class BorcherdsProductData:
    N: int
    weight: Fraction
    weyl_vectors: Mapping[int, Fraction]
    heegner_divisor: tuple
    exponents: Mapping[int, Fraction]
    cusp_orders: Mapping[int, Fraction]
    eta_quotient: EtaQuotient | None = None

    def product_expansion(self, order: int) -> QSeries:
        """e(rho z) prod_{n >= 1} (1 - q^n)^{c(n, n^2/4N)}, exact for `order` steps."""
        out = QSeries(Fraction(0), (Fraction(1),) + (Fraction(0),) * (order - 1))
        for n in range(1, order):
            r = self.exponents.get(n, Fraction(0))
            if r:
                factor = [Fraction(0)] * order
                factor[0] = Fraction(1)
                factor[n] = Fraction(-1)
                out = out * QSeries(Fraction(0), tuple(factor)).power(r)
        return QSeries(self.weyl_vectors[1], out.coeffs)


def borcherds_product(f: ThetaCombo, order: int = 50, heegner_divisor: tuple = ()) -> BorcherdsProductData:
    """Product data for a weakly holomorphic theta combination.

    Exponents come from the q-expansion of f at (n, n^2/4N); Weyl vectors from the
    closed inner products. The eta-quotient form uses Psi(theta^{w_c}) = eta(cz) eta(Nz/c)
    and multiplicativity.
    """
    N = f.N
    bound = Fraction(order * order, 4 * N)
    exp = theta_combo_expansion(f, bound)
    exponents = {}
    for n in range(1, order):
        v = exp.coefficient(n, Fraction(n * n, 4 * N))
        if v:
            exponents[n] = Fraction(v)
    weight = Fraction(exp.coefficient(0, 0))
    weyl = {c: weyl_vector(f, c) for c in divisors(N)}
    orders = {c: Fraction(c, N) * weyl[c] for c in divisors(N)}
    eta_exps: dict[int, Fraction] = {}
    for c, v in f.coeffs.items():
        for d in (c, N // c):
            eta_exps[d] = eta_exps.get(d, Fraction(0)) + v
    eq = EtaQuotient({d: r for d, r in eta_exps.items() if r})
    return BorcherdsProductData(N, weight, weyl, tuple(heegner_divisor), exponents, orders, eq)


# ---------------------------------------------------------------------------
# V_q


def v_q_operator(f: QExpansion, q: int, N: int) -> QExpansion:
    """Lift from level N/q to level N.

    c(gamma, n) = sum_{a | (n - Q(gamma), gamma, q)} c_f(gamma/a, q n / a^2),
    with n - Q(gamma) computed from the representative 0 <= gamma < 2N.
    """
    if N % q:
        raise ValueError(f"{q} does not divide {N}")
    if f.N != N // q:
        raise ValueError(f"input has level {f.N}, expected {N // q}")
    if q == 1:
        return f
    Nl = N // q
    bound = f.order_bound / q
    entries = {}
    for gamma in range(2 * N):
        base = Fraction(gamma * gamma, 4 * N)
        k = 0
        # n = base + j for integers j with 0 <= n <= bound
        j = -int(base)
        while base + j <= bound:
            n = base + j
            if n >= 0:
                shift = j  # n - Q(gamma) for this representative
                g = gcd(gcd(shift, gamma), q)
                total = 0
                for a in divisors(g) if g else divisors(q):
                    total += f.coefficient(gamma // a % (2 * Nl), q * n / (a * a))
                if total:
                    entries[(gamma, n)] = total
            j += 1
            k += 1
    return QExpansion.build(N, entries, bound, f.weight_tag)


# ---------------------------------------------------------------------------
# Hauptmoduln

GENUS_ZERO_FRICKE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71)
# eta exponents r_c with r_{N/c} = -r_c and sum c r_c = -24; w_N sends t to fricke_constant(N) / t
ETA_HAUPTMODUL_EXPONENTS = {
    2: {1: 24, 2: -24},
    3: {1: 12, 3: -12},
    5: {1: 6, 5: -6},
    7: {1: 4, 7: -4},
    13: {1: 2, 13: -2},
    6: {1: 6, 2: -6, 3: 6, 6: -6},
    10: {1: 4, 2: -4, 5: 4, 10: -4},
}


def fricke_constant(N: int) -> Fraction:
    """b with t(-1/Nz) = b / t(z): eta(-1/(N z / c)) = sqrt(-i N z / c) eta(N z / c) gives prod (N/c)^(r_c/2)."""
    out = Fraction(1)
    for c, r in ETA_HAUPTMODUL_EXPONENTS[N].items():
        out *= Fraction(N, c) ** (r // 2)
    return out


def _eisenstein(k: int, order: int) -> QSeries:
    # 1 - (2k / B_k) sum sigma_{k-1}(n) q^n for k = 4, 6
    factor = {4: 240, 6: -504}[k]
    return QSeries.make(0, [1] + [factor * divisor_sum(n, k - 1) for n in range(1, order)])


def _normalize_hauptmodul(f: QSeries) -> QSeries:
    """Scale to leading coefficient 1 at q^-1 and remove the constant term."""
    if f.offset != -1:
        raise ValueError("expected a simple pole at infinity")
    f = f.scale(1 / f.coeffs[0])
    coeffs = list(f.coeffs)
    coeffs[1] = Fraction(0)
    return QSeries(f.offset, tuple(coeffs))


def hauptmodul(N: int, order: int = 10, method: str = "eta") -> QSeries:
    """Normalized Hauptmodul q^-1 + 0 + c_1 q + ... of Gamma_0(N)+, exact through q^(order-2).

    N = 1: 'eta' builds E_4^3/Delta, 'eisenstein' builds 1728 E_4^3/(E_4^3 - E_6^2).
    Other levels: 'eta' builds t + b/t + a from the eta quotient t in ETA_HAUPTMODUL_EXPONENTS;
    the Fricke involution maps t to b/t (eta(-1/z) = sqrt(z/i) eta(z)), so t + b/t is invariant.
    'eisenstein' (N = 2 only) uses (E_4(z) + 4 E_4(2z))^2 / (eta(z) eta(2z))^8.
    """
    n_terms = order + 1
    if N == 1:
        E4 = _eisenstein(4, n_terms + 1)
        if method == "eta":
            delta = eta_product({1: 24}, n_terms + 1)
            f = (E4 * E4 * E4) * delta.inverse()
        elif method == "eisenstein":
            E6 = _eisenstein(6, n_terms + 1)
            cube = E4 * E4 * E4
            f = cube.scale(1728) * (cube - E6 * E6).inverse()
        else:
            raise ValueError(f"unknown method {method!r}")
        return _normalize_hauptmodul(f).truncate(n_terms)
    if method == "eta":
        if N not in ETA_HAUPTMODUL_EXPONENTS:
            raise UnsupportedInput(f"no eta-quotient Hauptmodul implemented for level {N}")
        t = eta_product(ETA_HAUPTMODUL_EXPONENTS[N], n_terms + 2)
        # t has leading term q^-1; 1/t starts at q^1
        inv = t.inverse().scale(fricke_constant(N))
        f = t + inv
        return _normalize_hauptmodul(f).truncate(n_terms)
    if method == "eisenstein":
        if N != 2:
            raise UnsupportedInput("the Eisenstein construction is implemented for level 2 only")
        E4 = _eisenstein(4, n_terms + 2)
        num = E4 + E4.rescale(2).scale(4)
        den = eta_product({1: 8, 2: 8}, n_terms + 2)
        f = (num * num) * den.inverse()
        return _normalize_hauptmodul(f).truncate(n_terms)
    raise ValueError(f"unknown method {method!r}")
