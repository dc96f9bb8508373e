"""Root systems and root data of the classified families.

Coordinates are always epsilon-first then delta, each block in index order.
The classical families use the form ``(e_i, e_j) = delta_ij`` and
``(d_i, d_j) = -delta_ij``.  The exceptional forms are::

    D21a(a)  diag(-(1+a), 1, a) / 2 on (e1, e2, e3)
    F4       diag(1, 1, 1, -3) on (e1, e2, e3, d)
    G3       (e1, e2, d) with e3 = -e1 - e2, Gram [[2,-1,0],[-1,2,0],[0,0,-2]]
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _linalg as la
from .lattice import (
    DualityPairing,
    Lattice,
    RationalForm,
    free_lattice,
    lattice_basis,
    lattice_direct_sum,
    quotient_lattice,
    sublattice,
)
from .rootdatum import GRS, RootDatum

__all__ = [
    "ParameterOutOfRange",
    "MixedKinds",
    "FamilyTag",
    "build_grs",
    "build_datum",
    "datum_from_grs",
    "direct_sum",
    "d21a_orbit",
    "canonical_alpha",
    "grs_corpus",
    "datum_corpus",
    "GROUP_FORMS",
]


class ParameterOutOfRange(ValueError):
    pass


class MixedKinds(TypeError):
    pass


FAMILIES = ("gl", "sl", "sltilde", "B", "C", "D", "D21a", "F4", "G3")
GROUP_FORMS = ("GL", "SL", "SLtilde", "OSp", "D21a", "F4", "G3")


def d21a_orbit(alpha) -> frozenset[Fraction]:
    """Parameters giving isomorphic D(2,1;a): the orbit of a under the S3 action."""
    a = Fraction(alpha)
    sigma = (-(1 + a), Fraction(1), a)
    out = set()
    for i, j in itertools.permutations(range(3), 2):
        if sigma[i] != 0 and sigma[j] != 0:
            out.add(sigma[j] / sigma[i])
    return frozenset(out)


def canonical_alpha(alpha) -> Fraction:
    """Orbit representative: smallest (num^2, den^2) among positive members, else smallest |a|."""
    orbit = d21a_orbit(alpha)
    pos = [x for x in orbit if x > 0]
    if pos:
        return min(pos, key=lambda x: (x.numerator ** 2, x.denominator ** 2))
    return min(orbit, key=lambda x: (abs(x), x))


@dataclass(frozen=True)
class FamilyTag:
    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterOutOfRange(f"unknown family {self.family!r}")
        if self.family == "D21a":
            object.__setattr__(self, "params", (Fraction(self.params[0]),))
        else:
            object.__setattr__(self, "params", tuple(int(p) for p in self.params))
        self._check()

    def _check(self):
        f, p = self.family, self.params
        need = {"gl": 2, "sl": 2, "sltilde": 2, "B": 2, "C": 1, "D": 2, "D21a": 1, "F4": 0, "G3": 0}[f]
        if len(p) != need:
            raise ParameterOutOfRange(f"{f} takes {need} parameters, got {len(p)}")
        bad = None
        if f in ("gl", "sl", "sltilde"):
            m, n = p
            if m < 1 or n < 1:
                bad = "m, n must be positive"
            elif f == "sl" and (m, n) == (2, 2):
                bad = "SL(2,2) is excluded"
            elif f == "sltilde" and m != n:
                bad = "sltilde needs m = n"
            elif f == "sltilde" and n == 2:
                bad = "sltilde(2|2) is excluded"
        elif f == "B" and (p[0] < 0 or p[1] < 1):
            bad = "B(m,n) needs m >= 0, n >= 1"
        elif f == "C" and p[0] < 1:
            bad = "C(n) needs n >= 1"
        elif f == "D" and (p[0] < 2 or p[1] < 1):
            bad = "D(m,n) needs m >= 2, n >= 1"
        elif f == "D21a" and p[0] == 0:
            bad = "alpha must be nonzero"
        if bad:
            raise ParameterOutOfRange(f"{self}: {bad}")

    def __str__(self):
        f, p = self.family, self.params
        if f in ("gl", "sl", "sltilde"):
            return f"{f}({p[0]}|{p[1]})"
        if f == "D21a":
            return f"D21a({la.fmt(p[0])})"
        if f in ("F4", "G3"):
            return f
        return f"{f}({','.join(map(str, p))})"

    @classmethod
    def parse(cls, text: str) -> "FamilyTag":
        """Accepts ``gl(2|1)``, ``B(1,1)``, ``osp(3|2)``, ``D21a(1/2)``, ``D(2,1;2)``, ``F4``, ``G(3)``."""
        s = text.replace(" ", "")
        if s in ("F4", "F(4)"):
            return cls("F4")
        if s in ("G3", "G(3)"):
            return cls("G3")
        m = re.fullmatch(r"(gl|sl|sltilde|psl)\((\d+)\|(\d+)\)", s)
        if m:
            fam = "sltilde" if m[1] == "psl" else m[1]
            return cls(fam, (int(m[2]), int(m[3])))
        m = re.fullmatch(r"A\((\d+),(\d+)\)", s)
        if m:
            return cls("gl", (int(m[1]), int(m[2])))
        m = re.fullmatch(r"osp\((\d+)\|(\d+)\)", s)
        if m:
            big, two_n = int(m[1]), int(m[2])
            if two_n % 2 or two_n == 0:
                raise ParameterOutOfRange(f"{text}: odd block must be 2n with n >= 1")
            n = two_n // 2
            if big % 2:
                return cls("B", ((big - 1) // 2, n))
            if big == 2:
                return cls("C", (n,))
            return cls("D", (big // 2, n))
        m = re.fullmatch(r"D(?:21a)?\((?:2,1;)?(-?\d+(?:/\d+)?)\)", s)
        if m and (s.startswith("D21a") or ";" in s):
            return cls("D21a", (Fraction(m[1]),))
        m = re.fullmatch(r"([BD])\((\d+),(\d+)\)", s)
        if m:
            return cls(m[1], (int(m[2]), int(m[3])))
        m = re.fullmatch(r"C\((\d+)\)", s)
        if m:
            return cls("C", (int(m[1]),))
        raise ParameterOutOfRange(f"cannot parse family tag {text!r}")

    def root_class(self) -> tuple:
        """Key identifying the tag's root system up to isometry and rescaling.

        gl, sl and sltilde share one root system; gl(m|n) and gl(n|m) agree
        after negating the form; D(2,1;a) depends only on the orbit of a and
        coincides with D(2,1) on the orbit of 1.
        """
        f, p = self.family, self.params
        if f in ("gl", "sl", "sltilde"):
            return ("A", (max(p), min(p)))
        if f == "D21a":
            a = canonical_alpha(p[0])
            if a == 1:
                return ("D", (2, 1))
            return ("D21a", (a,))
        return (f, p)

    @property
    def osp_shape(self) -> tuple[int, int]:
        """(M, 2n) for orthosymplectic tags."""
        f, p = self.family, self.params
        if f == "B":
            return 2 * p[0] + 1, 2 * p[1]
        if f == "C":
            return 2, 2 * p[0]
        if f == "D":
            return 2 * p[0], 2 * p[1]
        raise ValueError(f"{self} is not orthosymplectic")


def _unit(n: int, i: int, c=1) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def _comb(n: int, terms) -> la.Vec:
    v = [Fraction(0)] * n
    for i, c in terms:
        v[i] += Fraction(c)
    return tuple(v)


def _std_form(m: int, n: int) -> RationalForm:
    return RationalForm.diagonal([1] * m + [-1] * n)


def _pm(n, i, j=None):
    """All +-x_i +- x_j (or +-x_i) as coefficient term lists."""
    signs = (1, -1)
    if j is None:
        return [[(i, s)] for s in signs]
    return [[(i, s), (j, t)] for s in signs for t in signs]


def _osp_roots(m: int, n: int, odd_block: str) -> tuple[list, list]:
    """Roots for B/C/D type; odd_block in {'B', 'C', 'D'}. e indices 0..m-1, d indices m..m+n-1."""
    d = m + n
    E = range(m)
    D = range(m, m + n)
    even, odd = [], []
    if odd_block != "C":
        for i, j in itertools.combinations(E, 2):
            even += [_comb(d, t) for t in _pm(d, i, j)]
    if odd_block == "B":
        for i in E:
            even += [_comb(d, t) for t in _pm(d, i)]
    for i, j in itertools.combinations(D, 2):
        even += [_comb(d, t) for t in _pm(d, i, j)]
    for i in D:
        even += [_comb(d, [(i, 2)]), _comb(d, [(i, -2)])]
    if odd_block == "B":
        for i in D:
            odd += [_comb(d, t) for t in _pm(d, i)]
    for i in E:
        for j in D:
            odd += [_comb(d, t) for t in _pm(d, i, j)]
    return even, odd


def build_grs(tag: FamilyTag | str) -> GRS:
    if isinstance(tag, str):
        tag = FamilyTag.parse(tag)
    f, p = tag.family, tag.params
    if f in ("gl", "sl", "sltilde"):
        m, n = p
        d = m + n
        even = [_comb(d, [(i, 1), (j, -1)]) for i in range(m) for j in range(m) if i != j]
        even += [_comb(d, [(i, 1), (j, -1)]) for i in range(m, d) for j in range(m, d) if i != j]
        odd = []
        for i in range(m):
            for j in range(m, d):
                odd += [_comb(d, [(i, 1), (j, -1)]), _comb(d, [(i, -1), (j, 1)])]
        return GRS(_std_form(m, n), even, odd)
    if f == "B":
        m, n = p
        even, odd = _osp_roots(m, n, "B")
        return GRS(_std_form(m, n), even, odd)
    if f == "C":
        (n,) = p
        even, odd = _osp_roots(1, n, "C")
        return GRS(_std_form(1, n), even, odd)
    if f == "D":
        m, n = p
        even, odd = _osp_roots(m, n, "D")
        return GRS(_std_form(m, n), even, odd)
    if f == "D21a":
        a = p[0]
        form = RationalForm.diagonal([-(1 + a) / 2, Fraction(1, 2), a / 2])
        even = [_comb(3, [(i, s)]) for i in range(3) for s in (2, -2)]
        odd = [tuple(Fraction(s) for s in signs) for signs in itertools.product((1, -1), repeat=3)]
        return GRS(form, even, odd)
    if f == "F4":
        form = RationalForm.diagonal([1, 1, 1, -3])
        even = []
        for i, j in itertools.combinations(range(3), 2):
            even += [_comb(4, t) for t in _pm(4, i, j)]
        for i in range(3):
            even += [_comb(4, t) for t in _pm(4, i)]
        even += [_comb(4, [(3, 1)]), _comb(4, [(3, -1)])]
        half = Fraction(1, 2)
        odd = [tuple(half * s for s in signs) for signs in itertools.product((1, -1), repeat=4)]
        return GRS(form, even, odd)
    if f == "G3":
        form = RationalForm([[2, -1, 0], [-1, 2, 0], [0, 0, -2]])
        eps = [(1, 0, 0), (0, 1, 0), (-1, -1, 0)]
        delta = (0, 0, 1)
        even = []
        for e in eps:
            even += [la.vec(e), la.neg(la.vec(e))]
        for a, b in itertools.permutations(eps, 2):
            even.append(la.sub(la.vec(a), la.vec(b)))
        even += [la.scale(2, delta), la.scale(-2, delta)]
        odd = [la.vec(delta), la.neg(la.vec(delta))]
        for e in eps:
            for s, t in itertools.product((1, -1), repeat=2):
                odd.append(la.add(la.scale(s, e), la.scale(t, delta)))
        return GRS(form, even, odd)
    raise ParameterOutOfRange(str(tag))


# --------------------------------------------------------------------------
# root data


def _even_coroot(form: RationalForm, alpha) -> tuple[int, ...]:
    n = form(alpha, alpha)
    if n == 0:
        raise ValueError(f"even root {la.fmt_vec(alpha)} is isotropic")
    c = la.scale(Fraction(2) / n, form.apply(alpha))
    if not la.is_integral(c):
        raise ValueError(f"coroot of {la.fmt_vec(alpha)} is not integral: {la.fmt_vec(c)}")
    return tuple(int(x) for x in c)


def _assemble(X: Lattice, even, odd, form: RationalForm, name: str) -> RootDatum:
    return RootDatum(
        X,
        free_lattice(X.rank),
        DualityPairing.standard(X.rank),
        tuple((e, _even_coroot(form, e)) for e in even),
        tuple((g, 1) for g in odd),
        form,
        name,
    )


def _form_from_roots(X: Lattice, ambient_form: RationalForm, ambient_roots, coords) -> RationalForm:
    """Pull the ambient root Gram back to lattice coordinates.

    The ambient form need not descend to the quotient, but its values on
    roots do.  When the roots do not span, the basis is extended by
    coordinate vectors declared orthonormal to everything else.
    """
    r = X.rank
    idx = la.independent_subset(coords)
    basis = [la.vec(coords[i]) for i in idx]
    gram = [[ambient_form(ambient_roots[i], ambient_roots[j]) for j in idx] for i in idx]
    k = len(basis)
    for j in range(r):
        if len(basis) == r:
            break
        e = la.vec(_unit(r, j))
        if la.rank(basis + [e]) > len(basis):
            basis.append(e)
    full = [[Fraction(0)] * r for _ in range(r)]
    for i in range(k):
        for j in range(k):
            full[i][j] = gram[i][j]
    for i in range(k, r):
        full[i][i] = Fraction(1)
    binv = la.inverse(basis)
    return RationalForm(la.matmul(la.matmul(binv, full), la.transpose(binv)))


def _sl_datum(m: int, n: int, tilde: bool, name: str) -> RootDatum:
    grs = build_grs(FamilyTag("gl", (m, n)))
    w = tuple([1] * m + [-1] * n)
    X = quotient_lattice(m + n, [w])
    if tilde:
        X = sublattice(X, [tuple([1] * (m + n))])
    ambient = list(grs.even) + list(grs.odd)
    coords = [X.coordinates(v) for v in ambient]
    form = _form_from_roots(X, grs.form, ambient, coords)
    even = coords[: len(grs.even)]
    odd_mult: dict[tuple[int, ...], int] = {}
    for c in coords[len(grs.even):]:
        odd_mult[c] = odd_mult.get(c, 0) + 1
    return RootDatum(
        X,
        free_lattice(X.rank),
        DualityPairing.standard(X.rank),
        tuple((e, _even_coroot(form, e)) for e in even),
        tuple(odd_mult.items()),
        form,
        name,
    )


def datum_from_grs(grs: GRS, name: str = "") -> RootDatum:
    """Datum on the root lattice, coroots from the form.

    When the roots do not span, the lattice is ``Z^d + Z[roots]`` instead.
    Coordinates are the standard ones whenever the lattice is ``Z^d``.
    """
    d = grs.ambient_dim
    vectors = list(grs.roots)
    if not vectors or la.rank(vectors) < d:
        vectors = [la.vec(_unit(d, i)) for i in range(d)] + vectors
    basis = lattice_basis(vectors)
    binv = la.inverse(basis)

    def coords(v):
        c = la.vecmat(v, binv)
        if not la.is_integral(c):
            raise ValueError(f"{la.fmt_vec(v)} is not in the lattice")
        return tuple(int(x) for x in c)

    form = grs.form.transformed(basis)
    even = [coords(e) for e in grs.even]
    odd = [coords(g) for g in grs.odd]
    return _assemble(free_lattice(d), even, odd, form, name)


def build_datum(group_form: str, *params) -> RootDatum:
    """Root datum for ``GL m n``, ``SL m n``, ``SLtilde n``, ``OSp M 2n``, ``D21a a``, ``F4``, ``G3``."""
    g = group_form
    if g == "GL":
        m, n = (int(x) for x in params)
        FamilyTag("gl", (m, n))
        grs = build_grs(FamilyTag("gl", (m, n)))
        to_int = lambda v: tuple(int(x) for x in v)  # noqa: E731
        return _assemble(free_lattice(m + n), [to_int(e) for e in grs.even], [to_int(o) for o in grs.odd], grs.form, f"GL({m},{n})")
    if g == "SL":
        m, n = (int(x) for x in params)
        FamilyTag("sl", (m, n))
        return _sl_datum(m, n, False, f"SL({m},{n})")
    if g == "SLtilde":
        if len(params) == 1:
            n = int(params[0])
        else:
            n, n2 = (int(x) for x in params)
            if n != n2:
                raise ParameterOutOfRange("SLtilde needs m = n")
        FamilyTag("sltilde", (n, n))
        return _sl_datum(n, n, True, f"SLtilde({n},{n})")
    if g == "OSp":
        big, two_n = (int(x) for x in params)
        tag = FamilyTag.parse(f"osp({big}|{two_n})")
        grs = build_grs(tag)
        to_int = lambda v: tuple(int(x) for x in v)  # noqa: E731
        return _assemble(free_lattice(grs.ambient_dim), [to_int(e) for e in grs.even], [to_int(o) for o in grs.odd], grs.form, f"OSp({big},{two_n})")
    if g == "D21a":
        tag = FamilyTag("D21a", (Fraction(params[0]),))
        return datum_from_grs(build_grs(tag), str(tag))
    if g in ("F4", "G3"):
        return datum_from_grs(build_grs(FamilyTag(g)), g)
    raise ParameterOutOfRange(f"unknown group form {g!r}")


# --------------------------------------------------------------------------
# direct sums


def _block(mats: Sequence[Sequence[Sequence]]) -> la.Mat:
    n = sum(len(m) for m in mats)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i, row in enumerate(m):
            for j, x in enumerate(row):
                out[off + i][off + j] = Fraction(x)
        off += len(m)
    return tuple(map(tuple, out))


def _pad(v, off, total):
    return (0,) * off + tuple(v) + (0,) * (total - off - len(v))


def direct_sum(parts: Sequence[GRS | RootDatum]):
    parts = list(parts)
    if not parts:
        raise ValueError("direct_sum needs at least one part")
    if all(isinstance(p, GRS) for p in parts):
        total = sum(p.ambient_dim for p in parts)
        form = RationalForm(_block([p.form.matrix for p in parts]))
        even, odd, off = [], [], 0
        for p in parts:
            even += [_pad(v, off, total) for v in p.even]
            odd += [_pad(v, off, total) for v in p.odd]
            off += p.ambient_dim
        return GRS(form, even, odd)
    if all(isinstance(p, RootDatum) for p in parts):
        for p in parts:
            if not p.pairing.is_standard():
                raise ValueError("direct_sum of data needs standard pairings")
        total = sum(p.rank for p in parts)
        form = RationalForm(_block([p.form.matrix for p in parts]))
        even, odd, off = [], [], 0
        for p in parts:
            even += [(_pad(e, off, total), _pad(c, off, total)) for e, c in p.even_roots]
            odd += [(_pad(g, off, total), m) for g, m in p.odd_roots]
            off += p.rank
        name = " + ".join(p.name or "?" for p in parts)
        block = RootDatum(free_lattice(total), free_lattice(total), DualityPairing.standard(total), tuple(even), tuple(odd), form, name)
        X = lattice_direct_sum([p.X for p in parts])
        # rows: new coordinates of each old coordinate basis vector
        t, off = [], 0
        amb_total = X.ambient_rank
        amb_off = 0
        for p in parts:
            for b in p.X.basis():
                t.append(X.coordinates(_pad(b, amb_off, amb_total)))
            amb_off += p.X.ambient_rank
        return block.transformed(t, X=X)
    raise MixedKinds("direct_sum parts must all be GRS or all be RootDatum")


# --------------------------------------------------------------------------
# test corpus

D21A_ALPHAS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-3), Fraction(-2, 3))


def grs_corpus() -> list[FamilyTag]:
    """Every in-range tag of rank at most 6 used by the acceptance suites."""
    tags: list[FamilyTag] = []
    for m in range(1, 5):
        for n in range(1, 5):
            if m + n <= 6:
                tags.append(FamilyTag("gl", (m, n)))
            if m + n - 1 <= 6 and (m, n) != (2, 2):
                tags.append(FamilyTag("sl", (m, n)))
    for n in (1, 3, 4):
        if 2 * n - 2 <= 6:
            tags.append(FamilyTag("sltilde", (n, n)))
    for m in range(0, 4):
        for n in range(1, 4):
            tags.append(FamilyTag("B", (m, n)))
    for n in range(1, 4):
        tags.append(FamilyTag("C", (n,)))
    for m in range(2, 4):
        for n in range(1, 4):
            tags.append(FamilyTag("D", (m, n)))
    tags += [FamilyTag("D21a", (a,)) for a in D21A_ALPHAS]
    tags += [FamilyTag("F4"), FamilyTag("G3")]
    return tags


def datum_corpus() -> list[tuple[str, tuple]]:
    """(group_form, params) pairs matching :func:`grs_corpus`."""
    out: list[tuple[str, tuple]] = []
    for tag in grs_corpus():
        f, p = tag.family, tag.params
        if f == "gl":
            out.append(("GL", p))
        elif f == "sl":
            out.append(("SL", p))
        elif f == "sltilde":
            out.append(("SLtilde", (p[0],)))
        elif f in ("B", "C", "D"):
            out.append(("OSp", tag.osp_shape))
        elif f == "D21a":
            out.append(("D21a", p))
        else:
            out.append((f, ()))
    return out
