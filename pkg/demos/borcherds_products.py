#!/usr/bin/env python3
"""Borcherds products of unary theta functions.

The exponents are read off the theta q-expansion, the Weyl vector comes from a
closed Petersson inner product, and the product collapses to eta(cz) eta(Nz/c).
"""
from fractions import Fraction

from eisenkron.numtheory import divisors
from eisenkron.qseries import ThetaCombo, borcherds_product, eta_product, theta_d, theta_d_norm, weyl_vector

ORDER = 30

for N in (6, 10):
    for c in divisors(N):
        data = borcherds_product(ThetaCombo.of(N, {c: 1}), order=ORDER)
        eta = eta_product({c: 1, N // c: 1} if c * c != N else {c: 2}, ORDER)
        same = data.product_expansion(ORDER) == eta
        print(f"N = {N:2d}, c = {c:2d}: Weyl vector {data.weyl_vectors[1]}, equals eta({c}z) eta({N // c}z): {same}")

print("\ntheta_d at level 30: constant terms and closed norms (units of pi / sqrt 30)")
for d in (1, 6, 10, 15):
    f = theta_d(30, d, bound=2)
    print(f"  d = {d:2d}: constant term {f.coefficient(0, 0)}, norm {theta_d_norm(30, d).coef}")
print("\nWeyl vectors of theta at level 30 by cusp:", {c: str(weyl_vector(ThetaCombo.of(30, {1: 1}), c)) for c in divisors(30)})
