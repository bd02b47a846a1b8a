"""Binary quadratic forms with level structure and their Gamma_0(N)-classes.

A form ``[A, B, C]`` stands for ``A x^2 + B x y + C y^2``. Level-N forms have
``N | A``; the residue ``B mod 2N`` is the discriminant-module class of the
associated lattice vector, and the discriminant is ``B^2 - 4 A C = 4 N m``.

Matrices are integer 2x2 tuples ``((a, b), (c, d))`` and act on forms from the
right, ``Q.M = M^t Q M``; the root map satisfies ``z_{Q.M} = M^{-1} z_Q``.

Class enumeration works through the left cosets of Gamma_0(N) in SL_2(Z),
indexed by the projective line over Z/N: the Gamma_0(N)-classes inside one
SL_2(Z)-class with reduced representative Q0 are the orbits of Stab(Q0) on
P^1(Z/N).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Optional

import mpmath

from .discgroup import DiscElement, Level
from .numtheory import divisor_sum, pell_fundamental

__all__ = [
    "Matrix",
    "BinaryQF",
    "HeegnerPoint",
    "GeodesicQF",
    "ClassList",
    "InvalidPair",
    "mat_mul",
    "mat_inv",
    "mobius_action",
    "in_gamma0",
    "act",
    "reduce_form",
    "enumerate_classes",
    "heegner_point",
    "majorant",
    "majorant_closed_form",
    "hurwitz_class_number",
    "projective_line",
]

Matrix = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Matrix = ((1, 0), (0, 1))
MINUS_IDENTITY: Matrix = ((-1, 0), (0, -1))


class InvalidPair(ValueError):
    pass


def mat_mul(M: Matrix, K: Matrix) -> Matrix:
    (a, b), (c, d) = M
    (e, f), (g, h) = K
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_inv(M: Matrix) -> Matrix:
    (a, b), (c, d) = M
    return ((d, -b), (-c, a))


def mat_pow(M: Matrix, k: int) -> Matrix:
    out = IDENTITY
    base = M if k >= 0 else mat_inv(M)
    for _ in range(abs(k)):
        out = mat_mul(out, base)
    return out


def mobius_action(M, z):
    (a, b), (c, d) = M
    return (a * z + b) / (c * z + d)


def in_gamma0(M: Matrix, N: int) -> bool:
    (a, b), (c, d) = M
    return a * d - b * c == 1 and c % N == 0


@dataclass(frozen=True, order=True)
class BinaryQF:
    a: int
    b: int
    c: int
    N: int = 1

    def __post_init__(self):
        if self.a % self.N:
            raise ValueError(f"{self.N} must divide the leading coefficient {self.a}")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def beta(self) -> int:
        return self.b % (2 * self.N)

    @property
    def m(self) -> Fraction:
        return Fraction(self.disc, 4 * self.N)

    def coeffs(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __neg__(self) -> "BinaryQF":
        return BinaryQF(-self.a, -self.b, -self.c, self.N)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def value_at(self, z):
        """A|z|^2 + B Re z + C; vanishes exactly on the root set of the form."""
        x, y = z.real, z.imag
        return self.a * (x * x + y * y) + self.b * x + self.c

    def with_level(self, N: int) -> "BinaryQF":
        return BinaryQF(self.a, self.b, self.c, N)


def _act_coeffs(Q: tuple[int, int, int], M: Matrix) -> tuple[int, int, int]:
    a, b, c = Q
    (p, q), (r, s) = M
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def act(M: Matrix, Q: BinaryQF) -> BinaryQF:
    """Right action Q.M = M^t Q M; M must lie in Gamma_0(N)."""
    if not in_gamma0(M, Q.N):
        raise ValueError(f"{M} is not in Gamma_0({Q.N})")
    return BinaryQF(*_act_coeffs(Q.coeffs(), M), Q.N)


@dataclass(frozen=True)
class HeegnerPoint:
    form: BinaryQF
    z: mpmath.mpc


@dataclass(frozen=True)
class GeodesicQF:
    form: BinaryQF

    def contains(self, z, tol=1e-20) -> bool:
        return abs(self.form.value_at(z)) <= tol


def heegner_point(Q: BinaryQF) -> HeegnerPoint:
    """Root -B/2A + i sqrt|D| / 2|A| in the upper half-plane."""
    D = Q.disc
    if D >= 0 or Q.a == 0:
        raise ValueError("Heegner points need D < 0 and A != 0")
    z = mpmath.mpc(mpmath.mpf(-Q.b) / (2 * Q.a), mpmath.sqrt(-D) / (2 * abs(Q.a)))
    return HeegnerPoint(Q, z)


# ---------------------------------------------------------------------------
# SL_2(Z) reduction with transporting matrices: returns (Q0, M) with Q.M = Q0.


def _lt_sqrt(x: int, D: int) -> bool:
    """x < sqrt(D) for nonsquare D > 0."""
    return x < 0 or x * x < D


def _reduce_definite(Q):
    a, b, c = Q
    M = IDENTITY
    if a < 0:
        raise ValueError("definite reduction expects A > 0")
    while True:
        # bring b into (-a, a]
        t = (a - b) // (2 * a)
        if t:
            Tt = ((1, t), (0, 1))
            a, b, c = _act_coeffs((a, b, c), Tt)
            M = mat_mul(M, Tt)
        if c < a:
            S = ((0, -1), (1, 0))
            a, b, c = _act_coeffs((a, b, c), S)
            M = mat_mul(M, S)
            continue
        if c == a and b < 0:
            S = ((0, -1), (1, 0))
            a, b, c = _act_coeffs((a, b, c), S)
            M = mat_mul(M, S)
        return (a, b, c), M


def _is_reduced_indefinite(Q, D) -> bool:
    a, b, c = Q
    # 0 < b < sqrt D and sqrt D - b < 2|a| < sqrt D + b
    if not (b > 0 and _lt_sqrt(b, D)):
        return False
    lo = 2 * abs(a) + b  # sqrt D < 2|a| + b
    hi = 2 * abs(a) - b  # 2|a| - b < sqrt D
    return (not _lt_sqrt(lo, D)) and _lt_sqrt(hi, D)


def _rho_step(Q, D):
    a, b, c = Q
    # choose B' = -b + 2ct in the normalization interval for the new leading coefficient c
    ac = abs(c)
    r = isqrt(D)
    if _lt_sqrt(ac, D) or ac * ac == D:
        # sqrt D - 2|c| < B' < sqrt D: the largest admissible value congruent to -b mod 2|c|
        target = r if r * r < D else r - 1
        Bp = target - ((target + b) % (2 * ac))
    else:
        # -|c| < B' <= |c|
        Bp = ac - ((ac + b) % (2 * ac))
    t = (Bp + b) // (2 * c)
    M = ((0, -1), (1, t))
    return _act_coeffs(Q, M), M


def _reduce_indefinite(Q, D):
    M = IDENTITY
    cur = Q
    for _ in range(10_000):
        if _is_reduced_indefinite(cur, D):
            break
        cur, step = _rho_step(cur, D)
        M = mat_mul(M, step)
    else:  # pragma: no cover
        raise RuntimeError("indefinite reduction did not terminate")
    # walk the cycle and pick its lexicographic minimum as canonical
    best, best_M = cur, M
    start = cur
    walk, walk_M = cur, M
    for _ in range(100_000):
        walk, step = _rho_step(walk, D)
        walk_M = mat_mul(walk_M, step)
        if walk == start:
            break
        if walk < best:
            best, best_M = walk, walk_M
    return best, best_M


def _rational_roots(Q):
    """The two primitive (p, q) with Q(p, q) = 0 for a square discriminant."""
    a, b, c = Q
    n = isqrt(b * b - 4 * a * c)
    if a == 0:
        g = gcd(c, b)
        return [(1, 0), (-c // g, b // g)]
    out = []
    for sgn in (1, -1):
        p, q = -b + sgn * n, 2 * a
        g = gcd(p, q)
        out.append((p // g, q // g))
    return out


def _complete(p: int, q: int) -> Matrix:
    """Matrix in SL_2(Z) with first column (p, q), gcd(p, q) = 1."""
    g, x, y = _egcd(p, q)
    if g < 0:
        g, x, y = -g, -x, -y
    assert g == 1
    # p*x + q*y = 1 -> [[p, -y], [q, x]]
    return ((p, -y), (q, x))


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _egcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _reduce_square(Q, D):
    # move a rational root to infinity, then translate to [0, n, c] with 0 <= c < n
    n = isqrt(D)
    for p, q in _rational_roots(Q):
        g = _complete(p, q)
        R = _act_coeffs(Q, g)
        if R[0] == 0 and R[1] == n:
            k = -(R[2] // n)
            Tk = ((1, k), (0, 1))
            return _act_coeffs(R, Tk), mat_mul(g, Tk)
    raise RuntimeError("square-discriminant reduction failed")  # pragma: no cover


def reduce_form(Q: tuple[int, int, int]) -> tuple[tuple[int, int, int], Matrix]:
    """Canonical SL_2(Z)-representative Q0 and M with Q.M = Q0.

    Negative definite forms are reduced through their negatives.
    """
    a, b, c = Q
    D = b * b - 4 * a * c
    if D == 0:
        raise ValueError("degenerate form")
    if D < 0:
        if a < 0:
            (x, y, w), M = _reduce_definite((-a, -b, -c))
            return (-x, -y, -w), M
        return _reduce_definite(Q)
    r = isqrt(D)
    if r * r == D:
        return _reduce_square(Q, D)
    return _reduce_indefinite(Q, D)


@lru_cache(maxsize=None)
def _sl2_stabilizer(Q0: tuple[int, int, int]) -> tuple[tuple[Matrix, ...], Optional[Matrix]]:
    """(finite stabilizer elements, infinite-order generator or None) of a canonical form."""
    a, b, c = Q0
    D = b * b - 4 * a * c
    if D < 0:
        elems = []
        rng = (-1, 0, 1)
        for p in rng:
            for q in rng:
                for r in rng:
                    for s in rng:
                        M = ((p, q), (r, s))
                        if p * s - q * r == 1 and _act_coeffs(Q0, M) == Q0:
                            elems.append(M)
        return tuple(elems), None
    r = isqrt(D)
    if r * r == D:
        return (IDENTITY, MINUS_IDENTITY), None
    g = gcd(gcd(a, b), c)
    A, B, C = a // g, b // g, c // g
    t, u = pell_fundamental(D // (g * g))
    gen = (((t - B * u) // 2, -C * u), (A * u, (t + B * u) // 2))
    assert _act_coeffs(Q0, gen) == Q0
    return (IDENTITY, MINUS_IDENTITY), gen


@lru_cache(maxsize=None)
def projective_line(N: int) -> tuple[tuple[int, int], ...]:
    """Canonical representatives of P^1(Z/N) (minimal under unit scaling)."""
    units = [u for u in range(1, N + 1) if gcd(u, N) == 1] if N > 1 else [1]
    seen = set()
    out = []
    for x in range(N):
        for y in range(N):
            if gcd(gcd(x, y), N) != 1 and N > 1:
                continue
            canon = min(((u * x) % N, (u * y) % N) for u in units)
            if canon not in seen:
                seen.add(canon)
                out.append(canon)
    if N == 1:
        return ((0, 0),)
    return tuple(sorted(out))


def _canon_point(x: int, y: int, N: int) -> tuple[int, int]:
    if N == 1:
        return (0, 0)
    units = [u for u in range(1, N) if gcd(u, N) == 1]
    return min(((u * x) % N, (u * y) % N) for u in units)


def _lift_point(x: int, y: int, N: int) -> Matrix:
    """An SL_2(Z) matrix whose first column reduces to (x : y) mod N."""
    if N == 1:
        return IDENTITY
    for k in range(0, 4 * N * N + 4):
        p = x + N * (k % (2 * N + 1))
        q = y + N * (k // (2 * N + 1))
        if gcd(p, q) == 1:
            return _complete(p, q)
    raise RuntimeError("no coprime lift found")  # pragma: no cover


def _point_image(M: Matrix, pt: tuple[int, int], N: int) -> tuple[int, int]:
    (a, b), (c, d) = M
    x, y = pt
    return _canon_point(a * x + b * y, c * x + d * y, N)


@dataclass(frozen=True)
class FormClass:
    rep: BinaryQF
    stabilizer_order: Optional[int]  # None marks an infinite cyclic stabilizer
    automorph: Optional[Matrix] = None
    sl2_rep: tuple[int, int, int] = (0, 0, 0)
    point: tuple[int, int] = (0, 0)


@dataclass
class ClassList:
    beta: DiscElement
    D: int
    classes: list[FormClass] = field(default_factory=list)

    @property
    def reps(self) -> list[BinaryQF]:
        return [c.rep for c in self.classes]

    @property
    def stabilizer_orders(self) -> list:
        return [c.stabilizer_order if c.stabilizer_order is not None else "infinite-cyclic" for c in self.classes]

    def __len__(self):
        return len(self.classes)

    def classify(self, Q: BinaryQF) -> int:
        """Index of the class containing Q."""
        N = self.beta.level.N
        key = _class_key(Q.coeffs(), N)
        for i, cl in enumerate(self.classes):
            if (cl.sl2_rep, _orbit_rep(cl.sl2_rep, cl.point, N)) == key:
                return i
        raise KeyError(f"{Q} is not in any listed class")


@lru_cache(maxsize=None)
def _orbits(Q0: tuple[int, int, int], N: int) -> dict:
    finite, gen = _sl2_stabilizer(Q0)
    gens = list(finite) + ([gen] if gen is not None else [])
    pts = projective_line(N)
    rep_of = {}
    for p in pts:
        if p in rep_of:
            continue
        orbit = {p}
        frontier = [p]
        while frontier:
            q = frontier.pop()
            for g in gens:
                img = _point_image(g, q, N)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        r = min(orbit)
        for q in orbit:
            rep_of[q] = r
    return rep_of


def _orbit_rep(Q0, pt, N):
    return _orbits(Q0, N)[pt]


def _class_key(Q: tuple[int, int, int], N: int):
    Q0, M = reduce_form(Q)
    g = mat_inv(M)  # Q = Q0.g
    pt = _canon_point(g[0][0], g[1][0], N)
    return (Q0, _orbit_rep(Q0, pt, N))


def _sl2_canonical_forms(D: int) -> list[tuple[int, int, int]]:
    """Canonical representatives of all SL_2(Z)-classes of discriminant D (A > 0 if D < 0)."""
    out = set()
    if D < 0:
        a = 1
        while 3 * a * a <= -D:
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                out.add((a, b, c))
            a += 1
        return sorted(out)
    r = isqrt(D)
    if r * r == D:
        return sorted((0, r, c) for c in range(r))
    # every class meets the reduced forms; collect canonical cycle minima
    for b in range(1, r + 1):
        if (b * b - D) % 4:
            continue
        ac = (b * b - D) // 4  # a*c, negative
        for a in range(1, -ac + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                cand = (sa, b, ac // sa)
                if _is_reduced_indefinite(cand, D):
                    out.add(reduce_form(cand)[0])
    return sorted(out)


def enumerate_classes(beta: DiscElement, D: int) -> ClassList:
    """Gamma_0(N)-classes of forms [A, B, C] with N | A, B = beta mod 2N, disc D (A > 0 if D < 0)."""
    N = beta.level.N
    if D == 0:
        raise ValueError("D = 0 has no finite class structure")
    if (D - beta.beta**2) % (4 * N):
        raise InvalidPair(f"D = {D} is not congruent to beta^2 = {beta.beta}^2 mod {4 * N}")
    out = ClassList(beta, D)
    for Q0 in _sl2_canonical_forms(D):
        reps = _orbits(Q0, N)
        finite, gen = _sl2_stabilizer(Q0)
        for pt in sorted(set(reps.values())):
            R = _lift_point(pt[0], pt[1], N)
            form = _act_coeffs(Q0, R)
            if form[0] % N or (form[1] - beta.beta) % (2 * N):
                continue
            form = _small_rep(form, N)
            if gen is None:
                order = sum(1 for g in finite if _point_image(g, pt, N) == pt)
                out.classes.append(FormClass(BinaryQF(*form, N), order, None, Q0, pt))
            else:
                k, g = 1, gen
                while _point_image(g, pt, N) != pt:
                    g = mat_mul(g, gen)
                    k += 1
                auto = mat_mul(mat_mul(mat_inv(R), g), R)
                out.classes.append(FormClass(BinaryQF(*form, N), None, auto, Q0, pt))
    # automorphs above are for the lifted form; recompute for the shortened representative
    fixed = []
    for cl in out.classes:
        auto = cl.automorph
        if auto is not None:
            auto = _automorph_of(cl.rep.coeffs(), N)
        fixed.append(FormClass(cl.rep, cl.stabilizer_order, auto, cl.sl2_rep, cl.point))
    out.classes = sorted(fixed, key=lambda c: c.rep.coeffs())
    return out


def _automorph_of(form, N):
    """Generator of the Gamma_0(N)-stabilizer of an indefinite nonsquare form."""
    a, b, c = form
    D = b * b - 4 * a * c
    g = gcd(gcd(a, b), c)
    A, B, C = a // g, b // g, c // g
    t, u = pell_fundamental(D // (g * g))
    gen = (((t - B * u) // 2, -C * u), (A * u, (t + B * u) // 2))
    M = gen
    while M[1][0] % N:
        M = mat_mul(M, gen)
    assert _act_coeffs(form, M) == form
    return M


def _small_rep(form, N):
    """Shrink a representative inside its Gamma_0(N)-class by translations and N-lower moves."""
    a, b, c = form
    for _ in range(200):
        changed = False
        if a:
            t = -round(b / (2 * a))
            if t:
                a, b, c = _act_coeffs((a, b, c), ((1, t), (0, 1)))
                changed = True
        if c:
            # lower unipotent [[1,0],[N k,1]] changes B by 2 N k C
            k = -round(b / (2 * N * c))
            if k:
                a, b, c = _act_coeffs((a, b, c), ((1, 0), (N * k, 1)))
                changed = True
        if not changed:
            break
    return (a, b, c)


# ---------------------------------------------------------------------------
# Majorants


def majorant(X_form: BinaryQF, z) -> mpmath.mpf:
    """Q(X_z) by orthogonal projection onto the positive plane attached to z.

    With the negative unit vector X(z), (X, X(z)) = -(A|z|^2 + B x + C) / (sqrt(N) y)
    and Q(X(z)) = -1, so Q(X_z) = Q(X) + (X, X(z))^2 / 4.
    """
    N = X_form.N
    z = mpmath.mpc(z)
    y = z.imag
    pairing = -X_form.value_at(z) / (mpmath.sqrt(N) * y)
    return mpmath.mpf(X_form.disc) / (4 * N) + pairing**2 / 4


def majorant_closed_form(X_form: BinaryQF, z) -> mpmath.mpf:
    """Q(X_z) from hyperbolic geometry: m cosh^2 d(z, c_X) or |m| sinh^2 d(z, z_X)."""
    from .eisenstein import hyperbolic_distance

    m = mpmath.mpf(X_form.disc) / (4 * X_form.N)
    if X_form.disc > 0:
        d = hyperbolic_distance(z, GeodesicQF(X_form), method="geometric")
        return m * mpmath.cosh(d) ** 2
    if X_form.disc < 0:
        w = heegner_point(X_form).z
        d = hyperbolic_distance(z, w)
        return -m * mpmath.sinh(d) ** 2
    raise ValueError("isotropic vectors use the cusp formula")


# ---------------------------------------------------------------------------


def hurwitz_class_number(beta: DiscElement, m: Fraction) -> Fraction:
    """H_N(beta, m): sum of 2/|Gamma_0(N)_Q| over positive definite classes; -sigma_1(N)/6 at (0, 0)."""
    m = Fraction(m)
    N = beta.level.N
    if m > 0:
        raise ValueError("Hurwitz class numbers need m <= 0")
    if m == 0:
        if beta.beta != 0:
            raise ValueError("m = 0 requires beta = 0")
        return Fraction(-divisor_sum(N, 1), 6)
    D = m * 4 * N
    if D.denominator != 1:
        raise InvalidPair("m is not in Z + Q(beta)")
    cl = enumerate_classes(beta, int(D))
    return sum((Fraction(2, c.stabilizer_order) for c in cl.classes), Fraction(0))
