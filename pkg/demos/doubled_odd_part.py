"""Doubling the odd part of a Lie superalgebra.

Two copies of the odd part that do not bracket with each other keep the root
system.  For gl(1|1) the result is still a Lie superalgebra.  For sl(2|1) the
Jacobi identity breaks.  In both cases the search still finds a
non-degenerate invariant form: the Killing-type form on the even part plus
the original odd pairing on each copy.
"""

from superdatum import check_jacobi, double_odd, invariant_forms, realize

for tag in ("gl(1|1)", "sl(2|1)"):
    doubled = double_odd(realize(tag))
    even, odd = doubled.sdim
    print(f"{doubled.name}: dimension ({even}|{odd})")
    bad = check_jacobi(doubled)
    print("  Jacobi:", "holds" if bad is None else bad)
    res = invariant_forms(doubled)
    print(f"  invariant forms: {res.dimension}-dimensional space")
    if res.witness is not None:
        print(f"  non-degenerate member with determinant {res.witness.det()}")
    else:
        print(f"  no non-degenerate member: {res.certificate}")
