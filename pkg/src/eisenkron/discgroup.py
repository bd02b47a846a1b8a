"""Discriminant module Z/2NZ, its Atkin-Lehner involutions, and the divisor group D(N)."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .numtheory import divisors, is_squarefree, moebius

__all__ = [
    "Level",
    "DiscElement",
    "AtkinLehner",
    "q_of",
    "atkin_lehner_apply",
    "atkin_lehner_table",
    "star",
    "even_divisor_set",
    "character_value",
]


@dataclass(frozen=True)
class Level:
    N: int
    divisors: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        if not is_squarefree(self.N):
            raise ValueError(f"level {self.N} is not squarefree")
        object.__setattr__(self, "divisors", tuple(divisors(self.N)))

    @property
    def modulus(self) -> int:
        return 2 * self.N


@dataclass(frozen=True)
class DiscElement:
    level: Level
    beta: int

    def __post_init__(self):
        object.__setattr__(self, "beta", self.beta % (2 * self.level.N))

    def __neg__(self) -> "DiscElement":
        return DiscElement(self.level, -self.beta)

    def order(self) -> int:
        m = 2 * self.level.N
        return m // gcd(m, self.beta)


def q_of(beta: DiscElement) -> Fraction:
    """beta**2 / 4N mod 1."""
    N = beta.level.N
    return Fraction(beta.beta**2 % (4 * N), 4 * N)


@lru_cache(maxsize=None)
def atkin_lehner_table(N: int, c: int) -> tuple[int, ...]:
    """Permutation of Z/2NZ given by w_c: x = -b mod 2c and x = b mod 2N/c."""
    if N % c:
        raise ValueError(f"{c} does not divide {N}")
    M = 2 * N
    table = []
    for b in range(M):
        # CRT on the moduli 2c and 2N/c; their gcd is 2 and -b = b mod 2
        for x in range(((-b) % (2 * c)), M, 2 * c):
            if (x - b) % (2 * N // c) == 0:
                table.append(x)
                break
        else:  # pragma: no cover
            raise RuntimeError("CRT failure")
    return tuple(table)


@dataclass(frozen=True)
class AtkinLehner:
    level: Level
    c: int

    def __post_init__(self):
        if self.level.N % self.c:
            raise ValueError(f"{self.c} does not divide {self.level.N}")

    @property
    def table(self) -> tuple[int, ...]:
        return atkin_lehner_table(self.level.N, self.c)

    def __call__(self, beta: int) -> int:
        return self.table[beta % (2 * self.level.N)]


def atkin_lehner_apply(w: AtkinLehner, beta: DiscElement) -> DiscElement:
    return DiscElement(w.level, w(beta.beta))


def star(c: int, d: int) -> int:
    """Group law c * d / gcd(c, d)**2 on divisors of a squarefree level."""
    g = gcd(c, d)
    return c * d // (g * g)


def even_divisor_set(level: Level) -> list[int]:
    """Divisors with an even number of prime factors."""
    return [d for d in level.divisors if moebius(d) == 1]


def character_value(c: int, d: int) -> int:
    return moebius(gcd(c, d))
