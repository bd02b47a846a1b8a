#!/usr/bin/env python3
"""Closed-form Kronecker limit functions and their invariance under Gamma_0(N)."""
import random
from fractions import Fraction
from math import gcd

import mpmath

from eisenkron.klf import elliptic_klf, hauptmodul_value, hyperbolic_klf, numeric_cusp_order, parabolic_klf

mpmath.mp.prec = 128
rng = random.Random(1)


def random_matrix(N):
    while True:
        c, d = N * rng.randint(1, 5), rng.randint(-9, 9)
        if gcd(c, d) == 1:
            a = pow(d, -1, c) if c > 1 else 0
            return a, (a * d - 1) // c, c, d


z = mpmath.mpc("0.1234", "0.8765")
for name, result in [
    ("parabolic N=6", parabolic_klf(6)),
    ("hyperbolic N=6, n=1", hyperbolic_klf(6, 1, Fraction(1, 24))),
    ("elliptic N=6, D=-23", elliptic_klf(6, 1, Fraction(-23, 24))),
]:
    a, b, c, d = random_matrix(6)
    w = (a * z + b) / (c * z + d)
    print(f"{name:22s} K(z) = {mpmath.nstr(result(z), 15):>20s}   |K(Mz) - K(z)| = {mpmath.nstr(abs(result(w) - result(z)), 3)}")

constants = hyperbolic_klf(6, 1, Fraction(1, 24)).closed_form["constants"]
print("\nhyperbolic constants at N = 6, n = 1:", {d: str(v) for d, v in constants.items()})
res = elliptic_klf(1, 0, -1)
print("elliptic N = 1, D = -4: sampled cusp order", mpmath.nstr(numeric_cusp_order(res), 12), "vs", res.closed_form["cusp_orders"][1])
print("j*_6 at z:", mpmath.nstr(hauptmodul_value(6, z), 15))
