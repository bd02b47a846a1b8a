"""Kronecker limit functions of the averaged parabolic, hyperbolic and elliptic Eisenstein series.

All closed forms reduce to the Dedekind eta function, evaluated by moving the
argument into the standard fundamental domain (eta(z + 1) = e(1/24) eta(z),
eta(-1/z) = sqrt(-i z) eta(z)) and summing the pentagonal series there.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Optional

import mpmath

from .discgroup import DiscElement, Level, even_divisor_set
from .numtheory import divisor_sum, divisors, euler_phi, is_squarefree, moebius
from .qforms import enumerate_classes, heegner_point, hurwitz_class_number
from .qseries import ETA_HAUPTMODUL_EXPONENTS, UnsupportedInput, eta_expansion, fricke_constant, hauptmodul

__all__ = [
    "KLFResult",
    "eta_value",
    "hauptmodul_value",
    "parabolic_klf",
    "hyperbolic_klf_constants",
    "hyperbolic_klf",
    "elliptic_klf",
    "genus_zero_product_order",
    "HAUPTMODUL_LEVELS",
]

HAUPTMODUL_LEVELS = (1,) + tuple(sorted(ETA_HAUPTMODUL_EXPONENTS))

_ETA_TERMS = 60  # q <= e^(-pi sqrt 3) after reduction, so 60 pentagonal terms exceed any working precision used here


def _eta_coeffs():
    if not hasattr(_eta_coeffs, "cache"):
        series = eta_expansion(_ETA_TERMS * _ETA_TERMS)
        _eta_coeffs.cache = [(int(series.offset + i), int(c)) for i, c in enumerate(series.coeffs) if c]
    return _eta_coeffs.cache


def eta_value(z):
    """Dedekind eta at z in the upper half-plane."""
    z = mpmath.mpc(z)
    if z.imag <= 0:
        raise ValueError("eta needs Im z > 0")
    factor = mpmath.mpc(1)
    for _ in range(10000):
        n = int(mpmath.nint(z.real))
        if n:
            z -= n
            factor *= mpmath.expjpi(mpmath.mpf(n) / 12)
        if abs(z) < 1 - mpmath.mpf(10) ** (-mpmath.mp.dps // 2):
            w = -1 / z
            # eta(z) = eta(-1/w) = sqrt(-i w) eta(w)
            factor *= mpmath.sqrt(-1j * w)
            z = w
        else:
            break
    else:
        raise RuntimeError("reduction did not terminate")
    q = mpmath.expjpi(2 * z)
    total = mpmath.mpc(0)
    for k, c in _eta_coeffs():
        total += c * q**k
    return factor * mpmath.expjpi(z / 12) * total


def _log_abs_eta_quotient(exponents, z):
    return sum(mpmath.mpf(e.numerator) / e.denominator * mpmath.log(abs(eta_value(c * z))) for c, e in ((c, Fraction(e)) for c, e in exponents.items()))


def hauptmodul_value(N: int, z):
    """Normalized Hauptmodul q^-1 + O(q) of the Fricke group at level N, via eta quotients."""
    z = mpmath.mpc(z)
    if N == 1:
        x = (eta_value(z) / eta_value(2 * z)) ** 24
        return (x + 256) ** 3 / x**2 - 744
    if N not in ETA_HAUPTMODUL_EXPONENTS:
        raise UnsupportedInput(f"no Hauptmodul available at level {N}")
    t = mpmath.mpc(1)
    for c, r in ETA_HAUPTMODUL_EXPONENTS[N].items():
        t *= eta_value(c * z) ** r
    b = fricke_constant(N)
    shift = _hauptmodul_shift(N)
    return t + mpmath.mpf(b.numerator) / b.denominator / t + shift


def _hauptmodul_shift(N: int):
    from .qseries import eta_product

    t = eta_product(ETA_HAUPTMODUL_EXPONENTS[N], 3)
    f = t + t.inverse().scale(fricke_constant(N))
    c0 = f[0]
    return -mpmath.mpf(c0.numerator) / c0.denominator


@dataclass
class KLFResult:
    kind: str  # 'parabolic', 'hyperbolic', 'elliptic'
    N: int
    constant_term: Fraction
    kl_function: Optional[Callable] = field(repr=False)
    closed_form: dict = field(default_factory=dict)

    def __call__(self, z):
        if self.kl_function is None:
            raise UnsupportedInput("no closed-form evaluator at this level")
        return self.kl_function(z)

    def to_json(self) -> str:
        def enc(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, dict):
                return {str(k): enc(v) for k, v in x.items()}
            if isinstance(x, (list, tuple)):
                return [enc(v) for v in x]
            if isinstance(x, (mpmath.mpf, mpmath.mpc, complex, float)):
                return str(x)
            return x

        payload = {
            "kind": self.kind,
            "level": self.N,
            "constant_term": str(self.constant_term),
            "evaluator": None if self.kl_function is None else "closed-form",
            "closed_form": enc(self.closed_form),
        }
        return json.dumps(payload, sort_keys=True)


# ---------------------------------------------------------------------------
# parabolic


def parabolic_klf(N: int) -> KLFResult:
    """K(z) = (1/sigma_0(N)) sum_{c | N} log(|Delta(c z)|^(1/6) Im z), constant term 1."""
    if not is_squarefree(N):
        raise ValueError("level must be squarefree")
    ds = divisors(N)
    sigma0 = len(ds)

    def K(z):
        z = mpmath.mpc(z)
        return sum(4 * mpmath.log(abs(eta_value(c * z))) + mpmath.log(z.imag) for c in ds) / sigma0

    # |Delta(c z)|^(1/6) = |eta(c z)|^4
    return KLFResult(
        "parabolic",
        N,
        Fraction(1),
        K,
        {"eta_exponents": {c: Fraction(4, sigma0) for c in ds}, "im_power": Fraction(1), "normalization": "log(prod |eta(cz)|^e * Im z)"},
    )


def borcherds_lift_value(N: int, z):
    """Phi(z, P_00) = -2 (log(4 pi N) + Gamma'(1)) - 4 log |Psi(z) y| with Psi = prod_c eta(cz)^(4/sigma_0)."""
    from .qseries import ThetaCombo, borcherds_product

    ds = divisors(N)
    combo = ThetaCombo.of(N, {c: Fraction(2, len(ds)) for c in ds})
    data = borcherds_product(combo, order=5)
    z = mpmath.mpc(z)
    c00 = 2
    log_psi = _log_abs_eta_quotient(data.eta_quotient.exponents, z)
    return -c00 * (mpmath.log(4 * mpmath.pi * N) - mpmath.euler) - 4 * (log_psi + c00 * mpmath.log(z.imag) / 2)


# ---------------------------------------------------------------------------
# hyperbolic


def _square_root(D: int) -> Optional[int]:
    if D < 0:
        return None
    r = isqrt(D)
    return r if r * r == D else None


def hyperbolic_klf_constants(N: int, beta: int, m) -> dict[int, Fraction]:
    """C_{beta,m}(d) for d in E(N) minus {1}.

    With 4Nm = n^2 and w_f(n) = beta: 24 n mu((f,d)) / (sigma_0(N/(n,N)) sigma_1(N/d) phi(d)) when
    (n, d) = 1, else 0. All zero when 4Nm is not a square.
    """
    from .poincare import _atkin_lehner_divisor

    m = Fraction(m)
    if m <= 0:
        raise ValueError("hyperbolic constants need m > 0")
    if (m - Fraction(beta * beta, 4 * N)).denominator != 1:
        raise ValueError("m is not in Z + Q(beta)")
    ds = [d for d in even_divisor_set(Level(N)) if d != 1]
    n = _square_root(int(m * 4 * N))
    if n is None:
        return {d: Fraction(0) for d in ds}
    f = _atkin_lehner_divisor(N, n, beta % (2 * N))
    g = len(divisors(N // gcd(n, N)))
    out = {}
    for d in ds:
        if gcd(n, d) != 1:
            out[d] = Fraction(0)
        else:
            out[d] = Fraction(24 * n * moebius(gcd(f, d)), g * divisor_sum(N // d, 1) * euler_phi(d))
    return out


def hyperbolic_klf(N: int, beta: int, m) -> KLFResult:
    """K(z) = sum_d C(d) log prod_{c | N} |eta(cz)|^{mu((c,d))}."""
    consts = hyperbolic_klf_constants(N, beta, m)
    quotients = {d: {c: moebius(gcd(c, d)) for c in divisors(N)} for d in consts}
    active = {d: v for d, v in consts.items() if v != 0}

    def K(z):
        z = mpmath.mpc(z)
        logs = {c: mpmath.log(abs(eta_value(c * z))) for c in divisors(N)}
        total = mpmath.mpf(0)
        for d, v in active.items():
            total += mpmath.mpf(v.numerator) / v.denominator * sum(e * logs[c] for c, e in quotients[d].items())
        return total

    return KLFResult(
        "hyperbolic",
        N,
        Fraction(0),
        K,
        {"constants": consts, "eta_quotients": quotients, "vanishes": not active},
    )


# ---------------------------------------------------------------------------
# elliptic


@dataclass(frozen=True)
class EllipticDivisor:
    heegner_points: list  # (form coefficients, z, stabilizer order, exponent in the genus-0 product)
    root_order: int
    cusp_orders: dict  # c -> ord_{1/c}
    hurwitz: Fraction


def _elliptic_divisor(N: int, beta: int, m: Fraction) -> EllipticDivisor:
    D = int(m * 4 * N)
    b = DiscElement(Level(N), beta % (2 * N))
    classes = enumerate_classes(b, D)
    sigma0 = len(divisors(N))
    H = hurwitz_class_number(b, m)
    pts = []
    for fc in classes.classes:
        e = Fraction(2, fc.stabilizer_order * sigma0)
        pts.append((fc.rep.coeffs(), heegner_point(fc.rep).z, fc.stabilizer_order, e))
    root_order = 2 if (2 * beta) % (2 * N) == 0 else 1
    cusps = {c: -Fraction(c, N) * H / sigma0 for c in divisors(N)}
    return EllipticDivisor(pts, root_order, cusps, H)


def elliptic_klf(N: int, beta: int, m) -> KLFResult:
    """Divisor and cusp data for -log|Psi_{beta,m}|; at Hauptmodul levels also the evaluator

        K(z) = -sum_Q (2 / (|Gamma_Q| sigma_0(N))) log |j*_N(z) - j*_N(z_Q)|

    over positive definite classes Q of index (beta, m). The exponents are pinned by the
    cusp order -H_N(beta, m)/sigma_0(N) at infinity.
    """
    m = Fraction(m)
    if m >= 0:
        raise ValueError("elliptic data need m < 0")
    if (m - Fraction(beta * beta, 4 * N)).denominator != 1:
        raise ValueError("m is not in Z + Q(beta)")
    div = _elliptic_divisor(N, beta, m)
    record = {
        "heegner_points": [
            {"form": list(q), "z": str(z), "stabilizer_order": st, "exponent": e} for q, z, st, e in div.heegner_points
        ],
        "root_order": div.root_order,
        "cusp_orders": div.cusp_orders,
        "hurwitz": div.hurwitz,
    }
    if N not in HAUPTMODUL_LEVELS:
        return KLFResult("elliptic", N, Fraction(0), None, record)
    values = [(hauptmodul_value(N, z), e) for _, z, _, e in div.heegner_points]

    def K(z):
        jz = hauptmodul_value(N, z)
        return -sum(mpmath.mpf(e.numerator) / e.denominator * mpmath.log(abs(jz - jq)) for jq, e in values)

    record["hauptmodul_level"] = N
    return KLFResult("elliptic", N, Fraction(0), K, record)


def genus_zero_product_order(N: int, beta: int, m, order: int = 6) -> Fraction:
    """Leading q-exponent of prod_Q (j*_N - j*_N(z_Q))^{e_Q}: each factor has the order of j*_N at infinity."""
    res = elliptic_klf(N, beta, m)
    if res.kl_function is None:
        raise UnsupportedInput("no Hauptmodul at this level")
    j_series = hauptmodul(N, order)
    lead = j_series.strip().offset
    return sum((Fraction(p["exponent"]) * lead for p in res.closed_form["heegner_points"]), Fraction(0))


def numeric_cusp_order(res: KLFResult, y0: float = 4.0, y1: float = 5.0) -> mpmath.mpf:
    """(K(i y1) - K(i y0)) / (2 pi (y1 - y0)) estimates ord_infinity of Psi, since K = -log|Psi| ~ 2 pi y ord."""
    k0 = res(mpmath.mpc(0.1, y0))
    k1 = res(mpmath.mpc(0.1, y1))
    return (k1 - k0) / (2 * mpmath.pi * (y1 - y0))
