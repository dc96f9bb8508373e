"""Walk through odd reflections on the gl(2|1) root system.

An isotropic odd root does not give a linear reflection.  Instead each root
beta is sent to beta +- gamma, whichever is a root, or left alone when it is
orthogonal to gamma.  Since gamma is orthogonal to itself, gamma and -gamma
are fixed points of this map.  This script prints that map and checks it is an
involution.
"""

from superdatum import build_grs, lemma_violations, odd_reflection
from superdatum import _linalg as la

g = build_grs("gl(2|1)")
print("even roots:", ", ".join(la.fmt_vec(r) for r in g.even))
print("odd roots: ", ", ".join(la.fmt_vec(r) for r in g.odd))

for gamma in g.isotropic_odd():
    print(f"\nreflection in the isotropic root {la.fmt_vec(gamma)}:")
    for beta in g.roots:
        image = odd_reflection(g, gamma, beta)
        back = odd_reflection(g, gamma, image)
        note = "" if back == beta else "  <- not an involution!"
        print(f"  {la.fmt_vec(beta):>12} -> {la.fmt_vec(image)}{note}")

print("\nlemma violations:", {k: len(v) for k, v in lemma_violations(g).items()})
