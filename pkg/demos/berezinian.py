"""Berezinians of small supermatrices over a Grassmann algebra.

Entries in the diagonal blocks are even and entries in the off-diagonal
blocks are odd.  The Berezinian is the super analogue of the determinant and
is multiplicative.
"""

import random

from superdatum import SuperMatrix, berezinian
from superdatum.supermatrix import random_supermatrix

g = SuperMatrix.build(1, 1, [[1, "t1"], ["t2", 1]], generators=2)
print("Ber [[1, t1], [t2, 1]] =", berezinian(g))

h = SuperMatrix.build(2, 1, [[2, 1, "t1"], [0, 1, "t2"], ["t3", 0, "3 + t1*t2"]], generators=3)
print("Ber of a (2|1) example =", berezinian(h))

rng = random.Random(0)
a, b = random_supermatrix(1, 1, 4, rng), random_supermatrix(1, 1, 4, rng)
print("\nrandom pair over 4 generators:")
print("  Ber(a)        =", berezinian(a))
print("  Ber(b)        =", berezinian(b))
print("  Ber(a @ b)    =", berezinian(a @ b))
print("  Ber(a)*Ber(b) =", berezinian(a) * berezinian(b))
