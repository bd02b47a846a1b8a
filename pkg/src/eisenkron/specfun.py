"""Incomplete gamma, Tricomi U and Whittaker W at working precision.

Each function has a primary route and an independent second route so the two
can be compared (``method=``). Precision follows ``mpmath.mp``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath

__all__ = ["PrecisionContext", "inc_gamma_upper", "tricomi_u", "whittaker_w", "DivergentCorner"]


class DivergentCorner(ValueError):
    pass


@dataclass(frozen=True)
class PrecisionContext:
    bits: int = 128
    target_eps: float = 1e-30

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("precision below 64 bits is not supported")

    def __enter__(self):
        # frozen dataclass: the saved mpmath context lives outside the compared fields
        object.__setattr__(self, "_ctx", mpmath.workprec(self.bits))
        self._ctx.__enter__()
        return self

    def __exit__(self, *exc):
        return self._ctx.__exit__(*exc)


def _lower_series(s, x):
    # gamma(s, x) = x^s e^-x sum_k x^k / (s (s+1) ... (s+k))
    term = 1 / s
    total = term
    k = 0
    eps = mpmath.eps
    while True:
        k += 1
        term *= x / (s + k)
        total += term
        if abs(term) < eps * abs(total):
            break
    return x**s * mpmath.exp(-x) * total


def _upper_contfrac(s, x):
    # modified Lentz on Gamma(s,x) = e^-x x^s / (x + 1 - s - 1(1-s)/(x + 3 - s - ...))
    tiny = mpmath.mpf(10) ** (-mpmath.mp.dps * 2)
    b = x + 1 - s
    f = b if b != 0 else tiny
    C, D = f, 0
    i = 0
    while True:
        i += 1
        an = -i * (i - s)
        b += 2
        D = b + an * D
        D = tiny if D == 0 else D
        C = b + an / C
        C = tiny if C == 0 else C
        D = 1 / D
        delta = C * D
        f *= delta
        if abs(delta - 1) < mpmath.eps:
            break
        if i > 100000:
            raise RuntimeError("continued fraction did not converge")
    return mpmath.exp(-x) * x**s / f


def inc_gamma_upper(s, x, method: str = "auto"):
    """Gamma(s, x) = int_x^oo t^(s-1) e^-t dt.

    method: 'series' (Gamma(s) minus the lower series; needs s not a
    nonpositive integer), 'contfrac' (needs x > 0), or 'auto'.
    """
    s = mpmath.mpf(s)
    x = mpmath.mpf(x)
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        if s <= 0:
            raise DivergentCorner("Gamma(s, 0) diverges for s <= 0")
        return mpmath.gamma(s)
    if method == "auto":
        method = "series" if x < s + 1 and not _nonpos_int(s) else "contfrac"
    if method == "series":
        if _nonpos_int(s):
            raise ValueError("series route needs s not in {0, -1, -2, ...}")
        with mpmath.extraprec(30):
            return +(mpmath.gamma(s) - _lower_series(s, x))
    with mpmath.extraprec(20):
        return +_upper_contfrac(s, x)


def _nonpos_int(s) -> bool:
    return s <= 0 and s == int(s)


def _u_integral(a, b, x):
    # U(a,b,x) = 1/Gamma(a) int_0^oo e^{-xt} t^{a-1} (1+t)^{b-a-1} dt, Re a > 0
    f = lambda t: mpmath.exp(-x * t) * t ** (a - 1) * (1 + t) ** (b - a - 1)
    # split at the decay scale so tanh-sinh sees one smooth piece each
    scale = 1 / x
    return mpmath.quad(f, [0, scale, 10 * scale, mpmath.inf]) / mpmath.gamma(a)


def _u_kummer(a, b, x):
    # U = Gamma(1-b)/Gamma(a-b+1) M(a,b,x) + Gamma(b-1)/Gamma(a) x^(1-b) M(a-b+1,2-b,x); b not an integer
    M = lambda aa, bb: mpmath.hyp1f1(aa, bb, x)
    with mpmath.extraprec(3 * mpmath.mp.prec):
        t1 = mpmath.gamma(1 - b) * mpmath.rgamma(a - b + 1) * M(a, b)
        t2 = mpmath.gamma(b - 1) * mpmath.rgamma(a) * x ** (1 - b) * M(a - b + 1, 2 - b)
        return +(t1 + t2)


def tricomi_u(a, b, x, method: str = "integral"):
    """Confluent hypergeometric U(a, b, x) for x > 0.

    'integral': quadrature for Re a >= 1, shifted there from smaller Re a by
    U(a,b,x) = x U(a+1,b+1,x) - (b-a-1) U(a+1,b,x).
    'kummer': the two-term 1F1 connection formula (b must not be an integer).
    """
    a, b, x = mpmath.mpmathify(a), mpmath.mpmathify(b), mpmath.mpf(x)
    if x <= 0:
        raise ValueError("x must be positive")
    if method == "kummer":
        return _u_kummer(a, b, x)
    if method != "integral":
        raise ValueError(f"unknown method {method!r}")
    shift = 0
    while (a + shift).real < 1:
        shift += 1

    @lru_cache(maxsize=None)
    def u(i: int, j: int):
        # U(a + i, b + j, x)
        if i == shift:
            return _u_integral(a + i, b + j, x)
        return x * u(i + 1, j + 1) - (b + j - a - i - 1) * u(i + 1, j)

    with mpmath.extraprec(10 + 4 * shift):
        return +u(0, 0)


def whittaker_w(kappa, mu, x, method: str = "integral"):
    """W_{kappa,mu}(x) = e^(-x/2) x^(mu+1/2) U(1/2 + mu - kappa, 1 + 2 mu, x)."""
    kappa, mu, x = mpmath.mpmathify(kappa), mpmath.mpmathify(mu), mpmath.mpf(x)
    return mpmath.exp(-x / 2) * x ** (mu + mpmath.mpf(1) / 2) * tricomi_u(
        mpmath.mpf(1) / 2 + mu - kappa, 1 + 2 * mu, x, method=method
    )
