"""Generalized root systems, basic quasi-reductive root data and their axioms.

Two containers share one set of checks:

* :class:`GRS` lives in ``Q^d`` with a rational form and carries no lattice.
  Coroots are computed from the form.
* :class:`RootDatum` lives in lattice coordinates of ``X``.  Even roots carry
  explicit coroots in ``X^vee`` and odd roots carry multiplicities.

The axiom verifier :func:`verify_bqr` accepts either one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _linalg as la
from .lattice import DualityPairing, Lattice, RationalForm, free_lattice, span_rank, spans_lattice

__all__ = [
    "EVEN",
    "ODD",
    "IsotropicRoot",
    "AmbiguousReflection",
    "NotARoot",
    "GRS",
    "RootDatum",
    "Verdict",
    "BqrReport",
    "ClassicalReport",
    "SPAN_MODES",
    "verify_classical",
    "verify_bqr",
    "even_reflection",
    "coroot",
    "odd_reflection",
    "lemma_violations",
    "LEMMAS",
]

EVEN = "even"
ODD = "odd"
SPAN_MODES = ("strict", "rational", "lax")


class IsotropicRoot(ValueError):
    """A coroot was requested for a root of norm zero."""


class AmbiguousReflection(ValueError):
    """Both or neither of ``beta +- gamma`` are roots although ``(gamma, beta) != 0``."""


class NotARoot(ValueError):
    pass


def _canon(vectors: Iterable[Sequence]) -> tuple[la.Vec, ...]:
    return tuple(sorted({la.vec(v) for v in vectors}))


@dataclass(frozen=True)
class GRS:
    """Parity-labelled finite root set in a rational quadratic space."""

    form: RationalForm
    even: tuple[la.Vec, ...] = ()
    odd: tuple[la.Vec, ...] = ()
    _index: Mapping[la.Vec, str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.form, RationalForm):
            object.__setattr__(self, "form", RationalForm(self.form))
        even, odd = _canon(self.even), _canon(self.odd)
        d = self.form.dim
        index: dict[la.Vec, str] = {}
        for parity, vs in ((EVEN, even), (ODD, odd)):
            for v in vs:
                if len(v) != d:
                    raise ValueError(f"root {la.fmt_vec(v)} does not live in dimension {d}")
                if la.is_zero(v):
                    raise ValueError("0 is not allowed as a root")
                if v in index:
                    raise ValueError(f"{la.fmt_vec(v)} is listed as both even and odd")
                index[v] = parity
        object.__setattr__(self, "even", even)
        object.__setattr__(self, "odd", odd)
        object.__setattr__(self, "_index", index)

    @property
    def ambient_dim(self) -> int:
        return self.form.dim

    @property
    def roots(self) -> tuple[la.Vec, ...]:
        return tuple(sorted(self._index))

    def __contains__(self, v) -> bool:
        return la.vec(v) in self._index

    def __len__(self) -> int:
        return len(self._index)

    def parity(self, v: Sequence) -> str:
        try:
            return self._index[la.vec(v)]
        except KeyError:
            raise NotARoot(f"{la.fmt_vec(v)} is not a root") from None

    def norm(self, v: Sequence) -> Fraction:
        return self.form(v, v)

    def isotropic_odd(self) -> tuple[la.Vec, ...]:
        return tuple(g for g in self.odd if self.norm(g) == 0)

    def nonisotropic_odd(self) -> tuple[la.Vec, ...]:
        return tuple(g for g in self.odd if self.norm(g) != 0)

    def negated(self) -> "GRS":
        return GRS(self.form, [la.neg(v) for v in self.even], [la.neg(v) for v in self.odd])

    def __eq__(self, other):
        if not isinstance(other, GRS):
            return NotImplemented
        return self.form == other.form and self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.form.matrix, self.even, self.odd))


@dataclass(frozen=True)
class RootDatum:
    """Root datum in lattice coordinates.

    ``even_roots`` holds ``(root, coroot)`` pairs, roots in coordinates of
    ``X`` and coroots in coordinates of ``Xdual``.  ``odd_roots`` holds
    ``(root, multiplicity)`` pairs.  ``form`` is a rational form on
    ``X (x) Q`` in the same coordinates.
    """

    X: Lattice
    Xdual: Lattice
    pairing: DualityPairing
    even_roots: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    odd_roots: tuple[tuple[tuple[int, ...], int], ...]
    form: RationalForm
    name: str = ""

    def __post_init__(self):
        r = self.X.rank
        if self.Xdual.rank != r:
            raise ValueError("X and Xdual must have equal rank")
        if len(self.pairing.matrix) != r or any(len(row) != r for row in self.pairing.matrix):
            raise ValueError("pairing matrix does not match the lattice ranks")
        if not isinstance(self.form, RationalForm):
            object.__setattr__(self, "form", RationalForm(self.form))
        if self.form.dim != r:
            raise ValueError("form dimension must equal rank of X")
        even = []
        for root, co in self.even_roots:
            root, co = tuple(int(x) for x in root), tuple(int(x) for x in co)
            if len(root) != r or len(co) != r:
                raise ValueError("even root/coroot has wrong length")
            even.append((root, co))
        even.sort()
        mults: dict[tuple[int, ...], int] = {}
        for root, m in self.odd_roots:
            root = tuple(int(x) for x in root)
            if len(root) != r:
                raise ValueError("odd root has wrong length")
            if int(m) < 1:
                raise ValueError("odd multiplicities must be positive")
            mults[root] = mults.get(root, 0) + int(m)
        even_set = {e for e, _ in even}
        if len(even_set) != len(even):
            raise ValueError("duplicate even root")
        clash = even_set & set(mults)
        if clash:
            raise ValueError(f"{la.fmt_vec(min(clash))} is both even and odd")
        object.__setattr__(self, "even_roots", tuple(even))
        object.__setattr__(self, "odd_roots", tuple(sorted(mults.items())))

    @property
    def rank(self) -> int:
        return self.X.rank

    @property
    def even(self) -> tuple[tuple[int, ...], ...]:
        return tuple(e for e, _ in self.even_roots)

    @property
    def odd(self) -> tuple[tuple[int, ...], ...]:
        return tuple(g for g, _ in self.odd_roots)

    @property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.even + self.odd))

    def coroot_of(self, alpha: Sequence[int]) -> tuple[int, ...]:
        alpha = tuple(alpha)
        for e, c in self.even_roots:
            if e == alpha:
                return c
        raise NotARoot(f"{la.fmt_vec(alpha)} is not an even root")

    def multiplicity(self, gamma: Sequence[int]) -> int:
        return dict(self.odd_roots).get(tuple(gamma), 0)

    def is_monodromy(self) -> bool:
        return all(m == 1 for _, m in self.odd_roots)

    def ambient(self, v: Sequence[int]) -> tuple[int, ...]:
        """Representative of a lattice vector in the presentation's ambient coordinates."""
        return self.X.representative(v)

    def grs(self) -> GRS:
        """Multiplicity-free shadow; raises ValueError if 0 is an odd root."""
        return GRS(self.form, self.even, self.odd)

    def pair(self, x: Sequence, c: Sequence) -> Fraction:
        return self.pairing(x, c)

    def odd_coroot(self, gamma: Sequence[int]) -> la.Vec:
        """Coroot of an odd root as a functional in dual coordinates.

        Non-isotropic roots get ``2 F gamma / (gamma, gamma)``; isotropic roots
        the primitive integral functional proportional to ``F gamma``.
        """
        fg = self.form.apply(gamma)
        n = self.form(gamma, gamma)
        if n != 0:
            return la.scale(Fraction(2) / n, fg)
        if la.is_zero(fg):
            return fg
        return la.vec(la.primitive(fg))

    def transformed(self, t: Sequence[Sequence[int]], X: Lattice | None = None) -> "RootDatum":
        """Change coordinates by the unimodular ``t``; new coords are ``y @ t``.

        Coroots move by the inverse transpose, so pairings are preserved
        when the pairing is standard.
        """
        t = tuple(tuple(int(x) for x in r) for r in t)
        tinv = la.inverse(t)
        if not all(x.denominator == 1 for r in tinv for x in r):
            raise ValueError("coordinate change is not unimodular")
        tinv_i = tuple(tuple(int(x) for x in r) for r in tinv)

        def fwd(v):
            return tuple(int(x) for x in la.vecmat(v, t))

        def back(c):
            return tuple(int(x) for x in la.matvec(tinv_i, c))

        form = RationalForm(la.matmul(la.matmul(la.transpose(tinv_i), self.form.matrix), tinv_i))
        return RootDatum(
            X if X is not None else self.X,
            self.Xdual if X is None else free_lattice(self.rank),
            self.pairing,
            tuple((fwd(e), back(c)) for e, c in self.even_roots),
            tuple((fwd(g), m) for g, m in self.odd_roots),
            form,
            self.name,
        )


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Verdict:
    status: str  # pass | fail | skipped
    witness: str = ""
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass(frozen=True)
class BqrReport:
    span_mode: str
    verdicts: Mapping[str, Verdict]
    notes: tuple[str, ...] = ()

    def __getitem__(self, label: str) -> Verdict:
        return self.verdicts[label]

    @property
    def passed(self) -> bool:
        return not any(v.failed for v in self.verdicts.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if v.failed]

    def lines(self) -> list[str]:
        out = [f"span_mode {self.span_mode}"]
        for label, v in self.verdicts.items():
            line = f"{label} {v.status}"
            if v.witness:
                line += f" witness {v.witness}"
            if v.detail:
                line += f" ({v.detail})"
            out.append(line)
        out.extend(f"note {n}" for n in self.notes)
        return out


@dataclass(frozen=True)
class ClassicalReport:
    pairing: Verdict
    reflections: Verdict
    dual_reflections: Verdict

    @property
    def passed(self) -> bool:
        return self.pairing.passed and self.reflections.passed and self.dual_reflections.passed

    def lines(self) -> list[str]:
        out = []
        for label, v in (("pairing", self.pairing), ("reflections", self.reflections), ("dual_reflections", self.dual_reflections)):
            line = f"{label} {v.status}"
            if v.witness:
                line += f" witness {v.witness}"
            out.append(line)
        return out


def _ok() -> Verdict:
    return Verdict("pass")


def _fail(witness: str, detail: str = "") -> Verdict:
    return Verdict("fail", witness, detail)


# --------------------------------------------------------------------------
# classical root datum axioms


def verify_classical(datum: RootDatum) -> ClassicalReport:
    """Check the reductive root datum axioms on the even part."""
    even = set(datum.even)
    coroots = {c for _, c in datum.even_roots}
    bad = None
    for a, c in datum.even_roots:
        v = datum.pair(a, c)
        if v != 2:
            bad = f"<{la.fmt_vec(a)}, {la.fmt_vec(c)}> = {la.fmt(v)}"
            break
    pairing = _fail(bad) if bad else _ok()

    refl = _ok()
    for a, c in datum.even_roots:
        for b in datum.even:
            img = tuple(x - datum.pair(b, c) * y for x, y in zip(b, a))
            if img not in even:
                refl = _fail(f"s_{la.fmt_vec(a)}({la.fmt_vec(b)}) = {la.fmt_vec(img)}")
                break
        if refl.failed:
            break

    dual = _ok()
    for a, c in datum.even_roots:
        for _, d in datum.even_roots:
            img = tuple(x - datum.pair(a, d) * y for x, y in zip(d, c))
            if img not in coroots:
                dual = _fail(f"s_{la.fmt_vec(c)}({la.fmt_vec(d)}) = {la.fmt_vec(img)}")
                break
        if dual.failed:
            break
    return ClassicalReport(pairing, refl, dual)


# --------------------------------------------------------------------------
# common view of GRS and RootDatum for the BQR checks


@dataclass
class _View:
    form: RationalForm
    even: list[la.Vec]
    odd: list[la.Vec]
    mult: dict[la.Vec, int]
    even_coroot_pair: object  # callable(nu, alpha) -> Fraction
    lattice_rank: int | None  # None for a bare GRS
    integral_coords: bool

    @property
    def roots(self) -> set[la.Vec]:
        return set(self.even) | set(self.odd)


def _view(obj) -> _View:
    if isinstance(obj, GRS):
        f = obj.form

        def pair(nu, alpha):
            return 2 * f(nu, alpha) / f(alpha, alpha)

        return _View(f, list(obj.even), list(obj.odd), {g: 1 for g in obj.odd}, pair, None, False)
    if isinstance(obj, RootDatum):
        co = {la.vec(e): c for e, c in obj.even_roots}

        def pair(nu, alpha):
            return obj.pair(nu, co[la.vec(alpha)])

        return _View(
            obj.form,
            [la.vec(e) for e in obj.even],
            [la.vec(g) for g in obj.odd],
            {la.vec(g): m for g, m in obj.odd_roots},
            pair,
            obj.rank,
            True,
        )
    raise TypeError(f"expected GRS or RootDatum, got {type(obj).__name__}")


def _s1_image(view: _View, roots: set, gamma, nu):
    """Image of nu under the isotropic reflection, or an error string."""
    if view.form(gamma, nu) == 0:
        return nu, None
    plus, minus = la.add(nu, gamma), la.sub(nu, gamma)
    hits = [v for v in (plus, minus) if v in roots]
    if len(hits) != 1:
        which = "both" if hits else "neither"
        return None, f"gamma={la.fmt_vec(gamma)} nu={la.fmt_vec(nu)}: {which} of nu+-gamma are roots"
    return hits[0], None


def verify_bqr(obj: GRS | RootDatum, span_mode: str = "rational") -> BqrReport:
    """Check the four basic quasi-reductive axioms.

    ``span_mode`` selects how the spanning axiom is read: ``strict`` asks
    the integer span of the roots to be the whole lattice, ``rational``
    asks for full rational rank and ``lax`` skips it.  A bare GRS has no
    lattice, so ``strict`` compares against ``Z^d``.
    """
    if span_mode not in SPAN_MODES:
        raise ValueError(f"span_mode must be one of {SPAN_MODES}")
    v = _view(obj)
    roots = v.roots
    notes: list[str] = []
    verdicts: dict[str, Verdict] = {}

    # BQR(1)
    zero_even = [e for e in v.even if la.is_zero(e)]
    zero_odd = [g for g in v.odd if la.is_zero(g)]
    unbalanced = [g for g in v.odd if la.neg(g) not in v.mult]
    if zero_odd:
        verdicts["BQR(1)"] = _fail(la.fmt_vec(zero_odd[0]), "0 is an odd root")
    elif zero_even:
        verdicts["BQR(1)"] = _fail(la.fmt_vec(zero_even[0]), "0 is an even root")
    elif unbalanced:
        verdicts["BQR(1)"] = _fail(la.fmt_vec(unbalanced[0]), "negative is not an odd root")
    else:
        verdicts["BQR(1)"] = _ok()

    # BQR(2)
    dim = v.form.dim
    allroots = sorted(roots)
    if span_mode == "lax":
        verdicts["BQR(2)"] = Verdict("skipped")
    else:
        r = span_rank(allroots)
        if r < dim:
            verdicts["BQR(2)"] = _fail(f"rank deficit {dim - r}", f"span rank {r} < {dim}")
        elif span_mode == "rational":
            verdicts["BQR(2)"] = _ok()
        else:
            nonint = next((x for x in allroots if not la.is_integral(x)), None)
            if nonint is not None:
                verdicts["BQR(2)"] = _fail(la.fmt_vec(nonint), "root is not an integer vector")
            else:
                ok, factors = spans_lattice(allroots, dim)
                if ok:
                    verdicts["BQR(2)"] = _ok()
                else:
                    idx = 1
                    for f in factors:
                        idx *= f
                    verdicts["BQR(2)"] = _fail(f"index {idx}", "integer span of roots is a proper sublattice")

    # BQR(3)
    if not v.form.is_nondegenerate():
        rad = v.form.radical()
        verdicts["BQR(3)"] = _fail(la.fmt_vec(rad[0]), "form is degenerate")
    else:
        bad = None
        for b in v.even:
            nb = v.form(b, b)
            if nb == 0:
                bad = (la.fmt_vec(b), "even root is isotropic")
                break
            for a in v.even:
                lhs = v.even_coroot_pair(a, b)
                rhs = 2 * v.form(a, b) / nb
                if lhs != rhs:
                    bad = (f"alpha={la.fmt_vec(a)} beta={la.fmt_vec(b)}", f"pairing {la.fmt(lhs)} != {la.fmt(rhs)}")
                    break
            if bad:
                break
        verdicts["BQR(3)"] = _fail(*bad) if bad else _ok()
    if allroots:
        basis = [allroots[i] for i in la.independent_subset(allroots)]
        rr = la.rank(v.form.restricted(basis).matrix) if basis else 0
        if rr < len(basis):
            notes.append(f"form restricted to the root span has rank {rr} < {len(basis)}")

    # BQR(4)
    bad4 = None
    for g in v.odd:
        if la.is_zero(g):
            continue
        ng = v.form(g, g)
        if ng == 0:
            images = {}
            for nu in allroots:
                img, err = _s1_image(v, roots, g, nu)
                if err:
                    bad4 = (f"gamma={la.fmt_vec(g)} nu={la.fmt_vec(nu)}", err.split(": ", 1)[1])
                    break
                images[nu] = img
            if bad4:
                break
            if len(set(images.values())) != len(images):
                bad4 = (f"gamma={la.fmt_vec(g)}", "S1 map is not injective")
                break
        else:
            for nu in allroots:
                k = 2 * v.form(nu, g) / ng
                if k.denominator != 1:
                    bad4 = (f"gamma={la.fmt_vec(g)} nu={la.fmt_vec(nu)}", f"<nu, gamma^vee> = {la.fmt(k)} not integral")
                    break
                img = la.sub(nu, la.scale(k, g))
                if img not in roots:
                    bad4 = (f"gamma={la.fmt_vec(g)} nu={la.fmt_vec(nu)}", f"S2 image {la.fmt_vec(img)} is not a root")
                    break
            if bad4:
                break
    verdicts["BQR(4)"] = _fail(*bad4) if bad4 else _ok()

    nonmono = sorted(g for g, m in v.mult.items() if m > 1)
    if nonmono:
        notes.append(f"non-monodromy: {la.fmt_vec(nonmono[0])} has multiplicity {v.mult[nonmono[0]]}")
    return BqrReport(span_mode, verdicts, tuple(notes))


# --------------------------------------------------------------------------
# reflections


def even_reflection(datum: RootDatum, alpha: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """``v - <v, alpha^vee> alpha``."""
    c = datum.coroot_of(alpha)
    k = datum.pair(v, c)
    return tuple(int(x - k * y) for x, y in zip(v, alpha))


def coroot(grs: GRS, beta: Sequence) -> la.Vec:
    """The vector ``2 beta / (beta, beta)``; pairing by the form against it gives ``<., beta^vee>``."""
    beta = la.vec(beta)
    n = grs.form(beta, beta)
    if n == 0:
        raise IsotropicRoot(f"{la.fmt_vec(beta)} is isotropic")
    return la.scale(Fraction(2) / n, beta)


def odd_reflection(grs: GRS, gamma: Sequence, beta: Sequence) -> la.Vec:
    gamma, beta = la.vec(gamma), la.vec(beta)
    if grs.parity(gamma) != ODD:
        raise ValueError(f"{la.fmt_vec(gamma)} is not an odd root")
    if beta not in grs:
        raise NotARoot(f"{la.fmt_vec(beta)} is not a root")
    n = grs.form(gamma, gamma)
    if n != 0:
        k = 2 * grs.form(beta, gamma) / n
        return la.sub(beta, la.scale(k, gamma))
    if grs.form(gamma, beta) == 0:
        return beta
    hits = [v for v in (la.add(beta, gamma), la.sub(beta, gamma)) if v in grs]
    if len(hits) != 1:
        raise AmbiguousReflection(
            f"{'both' if hits else 'neither'} of {la.fmt_vec(beta)} +- {la.fmt_vec(gamma)} are roots"
        )
    return hits[0]


# --------------------------------------------------------------------------
# structural lemmas, each returning a list of violation witnesses


def _symmetry(grs: GRS) -> list[str]:
    return [la.fmt_vec(r) for r in grs.roots if la.neg(r) not in grs]


def _doubling(grs: GRS) -> list[str]:
    even = set(grs.even)
    return [la.fmt_vec(g) for g in grs.nonisotropic_odd() if la.scale(2, g) not in even]


def _integrality(grs: GRS) -> list[str]:
    out = []
    for g in grs.nonisotropic_odd():
        cg = coroot(grs, g)
        for b in grs.roots:
            k = grs.form(b, cg)
            if k.denominator != 1:
                out.append(f"<{la.fmt_vec(b)}, {la.fmt_vec(g)}^vee> = {la.fmt(k)}")
    return out


def _lines(grs: GRS, gamma: la.Vec) -> dict[la.Vec, list[Fraction]]:
    """Roots grouped by the line parallel to gamma they lie on, with their position along it."""
    p = next(i for i, x in enumerate(gamma) if x != 0)
    out: dict[la.Vec, list[Fraction]] = {}
    for r in grs.roots:
        t = r[p] / gamma[p]
        out.setdefault(la.sub(r, la.scale(t, gamma)), []).append(t)
    return out


def _string(grs: GRS, gamma: la.Vec, beta: la.Vec, lines=None) -> list[int]:
    """All integers k with beta + k gamma a root (0 included when beta is a root)."""
    lines = _lines(grs, gamma) if lines is None else lines
    p = next(i for i, x in enumerate(gamma) if x != 0)
    t0 = beta[p] / gamma[p]
    base = la.sub(beta, la.scale(t0, gamma))
    ks = [t - t0 for t in lines.get(base, ())]
    return sorted(int(k) for k in ks if k.denominator == 1)


def _string_bound(grs: GRS) -> list[str]:
    out = []
    for g in grs.isotropic_odd():
        lines = _lines(grs, g)
        for b in grs.roots:
            if grs.form(g, b) == 0:
                continue
            for k in _string(grs, g, b, lines):
                if k not in (-1, 0, 1):
                    out.append(f"gamma={la.fmt_vec(g)} beta={la.fmt_vec(b)} k={k}")
    return out


def _unique_pair(grs: GRS) -> list[str]:
    out = []
    for g in grs.isotropic_odd():
        for b in grs.roots:
            if grs.form(g, b) == 0:
                continue
            n = (la.add(b, g) in grs) + (la.sub(b, g) in grs)
            if n != 1:
                out.append(f"gamma={la.fmt_vec(g)} beta={la.fmt_vec(b)} hits={n}")
    return out


def _involution(grs: GRS) -> list[str]:
    out = []
    for g in grs.isotropic_odd():
        for b in grs.roots:
            try:
                back = odd_reflection(grs, g, odd_reflection(grs, g, b))
            except (AmbiguousReflection, NotARoot) as exc:
                out.append(f"gamma={la.fmt_vec(g)} beta={la.fmt_vec(b)}: {exc}")
                continue
            if back != b:
                out.append(f"gamma={la.fmt_vec(g)} beta={la.fmt_vec(b)} -> {la.fmt_vec(back)}")
    return out


LEMMAS = {
    "symmetry": _symmetry,
    "doubling": _doubling,
    "integrality": _integrality,
    "string_bound": _string_bound,
    "unique_pair": _unique_pair,
    "involution": _involution,
}


def lemma_violations(grs: GRS, which: Iterable[str] | None = None) -> dict[str, list[str]]:
    """Run the structural lemma checks; an empty list means the lemma holds."""
    names = list(LEMMAS) if which is None else list(which)
    return {name: LEMMAS[name](grs) for name in names}
