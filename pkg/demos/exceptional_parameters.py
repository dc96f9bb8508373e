"""The D(2,1;a) family: one root system per orbit of a.

The six values in the orbit of a = 2 all give isometric root systems, so
recognition reports a single canonical parameter.  The matching root data
are linked by an explicit integral change of coordinates.
"""

from fractions import Fraction

from superdatum import build_datum, build_grs, d21a_orbit, equivalent, recognize

orbit = sorted(d21a_orbit(2))
print("orbit of 2:", ", ".join(str(a) for a in orbit))
for a in orbit:
    print(f"  D21a({a}) is recognized as {recognize(build_grs(f'D21a({a})'))}")

e = equivalent(build_datum("D21a", 2), build_datum("D21a", Fraction(1, 2)))
print("\nequivalence D21a(2) -> D21a(1/2), rows of the matrix:")
for row in e.matrix:
    print("  ", row)

print("\nD21a(3) vs D21a(2):", equivalent(build_datum("D21a", 3), build_datum("D21a", 2)))
