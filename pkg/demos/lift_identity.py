#!/usr/bin/env python3
"""Theta lift of a Poincare series evaluated twice: as a lattice sum and as an
average of parabolic, hyperbolic or elliptic Eisenstein series at 2s."""
from fractions import Fraction

from eisenkron.eisenstein import eisenstein_side, lattice_sum

z, s = complex(0.1234, 0.8765), 1.3
cases = [(1, 0, -4, "elliptic"), (6, 1, -23, "elliptic"), (6, 1, 1, "hyperbolic"), (1, 0, 0, "parabolic"), (6, 0, 0, "parabolic")]

print(f"z = {z}, s = {s}")
for N, beta, D, kind in cases:
    m = Fraction(D, 4 * N)
    lattice = lattice_sum(N, beta, m, z, s, bound=3e5)
    eis = eisenstein_side(N, beta, m, z, s, bound=1500)
    print(
        f"N = {N}, beta = {beta}, D = {D:3d} ({kind:10s}) lattice {lattice.value:.9f} (tail {lattice.est_tail:.1e})"
        f"  eisenstein {eis.value:.9f} (tail {eis.est_tail:.1e})  gap {abs(lattice.value - eis.value):.1e}"
    )
