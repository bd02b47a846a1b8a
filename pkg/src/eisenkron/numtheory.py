"""Exact elementary arithmetic: factorization, Moebius, divisor sums, Kronecker symbols.

All functions operate on Python integers and return exact results.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

__all__ = [
    "InvalidDiscriminant",
    "FundDiscSplit",
    "factorize",
    "divisors",
    "moebius",
    "divisor_sum",
    "euler_phi",
    "is_squarefree",
    "kronecker_symbol",
    "is_fundamental",
    "fundamental_split",
    "pell_fundamental",
    "valuation",
]


class InvalidDiscriminant(ValueError):
    pass


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| by trial division, as ((p, e), ...)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def is_squarefree(n: int) -> bool:
    return n >= 1 and moebius(n) != 0


def divisor_sum(n: int, k: int = 1) -> int:
    """sigma_k(n)."""
    return sum(d**k for d in divisors(n))


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n) with (D/0) = [|D| = 1] and the sign rule at -1."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * _jacobi(D, n)


@dataclass(frozen=True)
class FundDiscSplit:
    D0: int
    f: int

    def recompose(self) -> int:
        return self.D0 * self.f * self.f


def is_fundamental(D: int) -> bool:
    """True if D is a fundamental discriminant (1 counts as fundamental)."""
    if D == 0:
        return False
    if D % 4 == 1:
        return is_squarefree(abs(D))
    if D % 4 == 0:
        q = D // 4
        return q % 4 in (2, 3) and is_squarefree(abs(q))
    return False


def fundamental_split(delta: int) -> FundDiscSplit:
    """Write a discriminant as D0 * f**2 with D0 fundamental."""
    if delta == 0 or delta % 4 in (2, 3):
        raise InvalidDiscriminant(f"{delta} is not a nonzero discriminant")
    f = 1
    for p, e in factorize(delta):
        f *= p ** (e // 2)
    # f**2 is the largest square divisor; back off by 2 if D0 is not a discriminant
    core = delta // (f * f)
    if core % 4 in (2, 3):
        f //= 2
        core = delta // (f * f)
    return FundDiscSplit(core, f)


def pell_fundamental(D: int) -> tuple[int, int]:
    """Smallest (t, u) with u > 0 and t**2 - D*u**2 == 4.

    (t + u sqrt D)/2 = x + y w with w = (s + sqrt D)/2, s = D mod 2, so u = y and
    t = 2x + s y; the solution has norm x^2 + s x y - (D - s)/4 y^2 = 1 and x/y is
    a convergent of w - s, read off the continued fraction of w.
    """
    if D <= 0 or D % 4 in (2, 3):
        raise InvalidDiscriminant(f"{D} is not a positive discriminant")
    r = isqrt(D)
    if r * r == D:
        raise InvalidDiscriminant(f"{D} is a perfect square")
    s = D % 2
    c = (D - s) // 4
    P, Q = s, 2  # w = (P + sqrt D) / Q with Q | D - P^2
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while True:
        a = (P + r) // Q
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        x, y = p - s * q, q
        if x * x + s * x * y - c * y * y == 1:
            return 2 * x + s * y, y
        P = a * Q - P
        Q = (D - P * P) // Q
