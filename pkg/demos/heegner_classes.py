#!/usr/bin/env python3
"""Gamma_0(N)-classes of binary quadratic forms, Heegner points, geodesics and
Hurwitz class numbers, checked against a brute-force count of reduced forms."""
from fractions import Fraction

from eisenkron.discgroup import DiscElement, Level
from eisenkron.qforms import GeodesicQF, enumerate_classes, heegner_point, hurwitz_class_number
from eisenkron.eisenstein import hyperbolic_distance


def show(N, beta, D):
    classes = enumerate_classes(DiscElement(Level(N), beta), D)
    print(f"N = {N}, beta = {beta}, D = {D}: {len(classes.reps)} classes")
    for rep in classes.reps:
        if D < 0:
            print(f"  {rep.coeffs()}  Heegner point {heegner_point(rep).z}")
        else:
            print(f"  {rep.coeffs()}  geodesic, distance from i: {hyperbolic_distance(1j, GeodesicQF(rep))}")


show(1, 1, -23)
show(6, 1, -23)
show(6, 1, 1)
show(2, 1, 17)


def reduced_form_count(D):
    # |b| <= a <= c, b >= 0 on the boundary; weights 1/2, 1/3 at i and rho
    total = Fraction(0)
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            weight = Fraction(1, 2) if (a == c and b == 0) else Fraction(1, 3) if (a == b == c) else 1
            total += weight
        a += 1
    return total


print("\nHurwitz class numbers at level 1:")
for D in (-3, -4, -7, -8, -12, -15, -20, -23, -24):
    H = hurwitz_class_number(DiscElement(Level(1), D % 2), Fraction(D, 4))
    print(f"  H({D}) = {H}   reduced-form count {reduced_form_count(D)}")
