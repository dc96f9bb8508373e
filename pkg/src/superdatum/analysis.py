"""Decomposition, recognition and equivalence of root systems and data."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import _linalg as la
from .catalog import FamilyTag, ParameterOutOfRange, build_grs, canonical_alpha
from .lattice import RationalForm, lattice_basis
from .rootdatum import EVEN, GRS, RootDatum, even_reflection

__all__ = [
    "NotIrreducible",
    "OrbitTooLarge",
    "decompose",
    "is_irreducible",
    "Isometry",
    "find_isometry",
    "RecognitionResult",
    "recognize",
    "Equivalence",
    "equivalent",
    "equivalence_search",
    "weyl_orbit",
]


class NotIrreducible(ValueError):
    pass


class OrbitTooLarge(RuntimeError):
    pass


# --------------------------------------------------------------------------
# decomposition


def _components(roots: Sequence[la.Vec], form: RationalForm) -> list[list[int]]:
    n = len(roots)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)

    index = {r: i for i, r in enumerate(roots)}
    for i in range(n):
        for j in range(i + 1, n):
            if form(roots[i], roots[j]) != 0:
                union(i, j)
    # an isotropic root orthogonal to everything still belongs with its negative
    for i, r in enumerate(roots):
        j = index.get(la.neg(r))
        if j is not None:
            union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _restrict(grs: GRS, members: Sequence[la.Vec]) -> GRS:
    """The GRS on the integer span of ``members`` in lattice-basis coordinates."""
    basis = lattice_basis(members)
    pinv = _pseudo_inverse(basis)
    form = grs.form.restricted(basis)
    even = [la.vecmat(v, pinv) for v in members if grs.parity(v) == EVEN]
    odd = [la.vecmat(v, pinv) for v in members if grs.parity(v) != EVEN]
    return GRS(form, even, odd)


def _pseudo_inverse(basis: Sequence[la.Vec]) -> la.Mat:
    """Right inverse P of the basis rows: ``v @ P`` gives coordinates for v in the span."""
    bt = la.transpose(basis)
    return la.matmul(bt, la.inverse(la.matmul(basis, bt)))


def decompose(grs: GRS) -> list[GRS]:
    """Split into orthogonal components, each on the integer span of its roots."""
    roots = list(grs.roots)
    return [_restrict(grs, [roots[i] for i in comp]) for comp in _components(roots, grs.form)]


def is_irreducible(grs: GRS) -> bool:
    """Exactly one component; the empty system has none and is not irreducible."""
    return len(decompose(grs)) == 1


# --------------------------------------------------------------------------
# isometry search


@dataclass(frozen=True)
class Isometry:
    """``v @ matrix`` maps roots of the source onto roots of the target.

    On the root span, target form = ``scale`` * source form.
    """

    matrix: la.Mat
    scale: Fraction

    def apply(self, v: Sequence) -> la.Vec:
        return la.vecmat(v, self.matrix)


@dataclass
class _Span:
    grs: GRS
    basis: list[la.Vec]
    pinv: la.Mat
    coords: dict[la.Vec, la.Vec]  # root -> span coordinates
    gram: la.Mat
    roots_c: set[la.Vec]
    parity_c: dict[la.Vec, str]

    @classmethod
    def of(cls, grs: GRS) -> "_Span":
        roots = list(grs.roots)
        basis = [roots[i] for i in la.independent_subset(roots)]
        pinv = _pseudo_inverse(basis) if basis else ()
        coords = {r: la.vecmat(r, pinv) for r in roots}
        gram = grs.form.restricted(basis).matrix if basis else ()
        parity_c = {coords[r]: grs.parity(r) for r in roots}
        return cls(grs, basis, pinv, coords, gram, set(parity_c), parity_c)

    def form(self, u, v) -> Fraction:
        return la.bilinear(self.gram, u, v)


def _connected_order(roots: Sequence[la.Vec], pair) -> list[la.Vec]:
    """Independent roots chosen breadth-first along nonzero pairings."""
    remaining = list(roots)
    chosen: list[la.Vec] = []
    while remaining:
        start = remaining[0]
        queue = deque([start])
        seen = {start}
        while queue:
            r = queue.popleft()
            if la.rank(chosen + [r]) > len(chosen):
                chosen.append(r)
            for s in remaining:
                if s not in seen and pair(r, s) != 0:
                    seen.add(s)
                    queue.append(s)
        remaining = [r for r in remaining if r not in seen]
    return chosen


def find_isometry(source: GRS, target: GRS, allow_scale: bool = True) -> Isometry | None:
    """Linear map of root spans taking roots onto roots with parity and form preserved.

    With ``allow_scale`` the form may change by a nonzero global factor.
    The first witness in the canonical search order is returned.
    """
    if len(source) != len(target) or len(source.even) != len(target.even):
        return None
    s, t = _Span.of(source), _Span.of(target)
    k = len(s.basis)
    if k != len(t.basis):
        return None
    if k == 0:
        return Isometry(la.zeros(source.ambient_dim, target.ambient_dim), Fraction(1))
    src = [s.coords[r] for r in _connected_order(list(source.roots), source.form)]
    src_par = [s.parity_c[v] for v in src]
    src_mat_inv = la.inverse(src)
    cand_by_parity = {p: sorted(v for v in t.roots_c if t.parity_c[v] == p) for p in (EVEN, "odd")}

    def leaf(images, scale):
        m = la.matmul(src_mat_inv, images)
        for r in s.roots_c:
            img = la.vecmat(r, m)
            if t.parity_c.get(img) != s.parity_c[r]:
                return None
        ambient = la.matmul(la.matmul(s.pinv, m), t.basis)
        return Isometry(ambient, scale if scale is not None else Fraction(1))

    def search(i, images, scale):
        if i == k:
            return leaf(images, scale)
        b = src[i]
        for c in cand_by_parity[src_par[i]]:
            sc = scale
            ok = True
            for j in range(i + 1):
                bj = src[j] if j < i else b
                tj = images[j] if j < i else c
                g1, g2 = s.form(b, bj), t.form(c, tj)
                if (g1 == 0) != (g2 == 0):
                    ok = False
                    break
                if g1 != 0:
                    if sc is None:
                        sc = g2 / g1
                        if not allow_scale and sc != 1:
                            ok = False
                            break
                    elif g2 != sc * g1:
                        ok = False
                        break
            if not ok:
                continue
            for j in range(i):
                for sign in (1, -1):
                    u = la.add(b, la.scale(sign, src[j]))
                    w = la.add(c, la.scale(sign, images[j]))
                    if s.parity_c.get(u) != t.parity_c.get(w):
                        ok = False
                        break
                if not ok:
                    break
            if not ok or la.rank(images + [c]) <= i:
                continue
            found = search(i + 1, images + [c], sc)
            if found is not None:
                return found
        return None

    return search(0, [], None)


# --------------------------------------------------------------------------
# recognition


@dataclass(frozen=True)
class RecognitionResult:
    family: FamilyTag | None
    witness: Isometry | None = None
    invariants: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def known(self) -> bool:
        return self.family is not None

    @property
    def parameters(self) -> tuple:
        return self.family.params if self.family else ()

    def __str__(self):
        return str(self.family) if self.family else "Unknown"


def _invariants(grs: GRS) -> dict:
    k = la.rank(list(grs.roots)) if len(grs) else 0
    return {
        "span_rank": k,
        "even": len(grs.even),
        "odd": len(grs.odd),
        "isotropic": len(grs.isotropic_odd()),
        "center_dim": grs.ambient_dim - k,
    }


def _d21a_alphas(grs: GRS) -> list[Fraction]:
    """Candidate D(2,1;a) parameters read off the three orthogonal even pairs."""
    pos = sorted({max(e, la.neg(e)) for e in grs.even})
    if len(pos) != 3:
        return []
    if any(grs.form(a, b) != 0 for a, b in itertools.combinations(pos, 2)):
        return []
    norms = [grs.form(e, e) for e in pos]
    if sum(norms) != 0:
        return []
    out = set()
    for i, j in itertools.permutations(range(3), 2):
        if norms[i] != 0:
            out.add(norms[j] / norms[i])
    return sorted(out)


def _templates(inv: dict, grs: GRS) -> Iterator[FamilyTag]:
    k = inv["span_rank"]
    for m in range(1, k + 2):
        n = k + 1 - m
        if 1 <= n <= m:
            yield FamilyTag("gl", (m, n))
    for n in range(1, k + 1):
        yield FamilyTag("B", (k - n, n))
    if k >= 2:
        yield FamilyTag("C", (k - 1,))
    for m in range(2, k):
        yield FamilyTag("D", (m, k - m))
    if k == 3:
        alphas = {canonical_alpha(a) for a in _d21a_alphas(grs) if a != 0}
        for a in sorted(alphas):
            yield FamilyTag("D21a", (a,))
        yield FamilyTag("G3")
    if k == 4:
        yield FamilyTag("F4")


def recognize(grs: GRS) -> RecognitionResult:
    """Identify an irreducible GRS with a catalog family by isometry search."""
    comps = decompose(grs)
    if len(comps) != 1:
        raise NotIrreducible(f"GRS has {len(comps)} components")
    inv = _invariants(grs)
    matches = []
    for tag in _templates(inv, grs):
        try:
            tmpl = build_grs(tag)
        except ParameterOutOfRange:
            continue
        ti = _invariants(tmpl)
        if any(ti[key] != inv[key] for key in ("span_rank", "even", "odd", "isotropic")):
            continue
        iso = find_isometry(grs, tmpl)
        if iso is not None:
            matches.append((ti["center_dim"] != inv["center_dim"], len(matches), tag, iso))
    if not matches:
        return RecognitionResult(None, None, inv, ("no catalog template matches",))
    matches.sort(key=lambda m: (m[0], m[1]))
    _, _, tag, iso = matches[0]
    notes = []
    if tag.family == "gl":
        notes.append("gl, sl and sltilde share this root system")
    if tag.family == "D21a" and tag.params[0] == -1:
        notes.append("degenerate parameter a = -1: the form vanishes on one even root")
    if tag == FamilyTag("D", (2, 1)) and any(m[2].family == "D21a" for m in matches):
        notes.append("also D21a with parameter in the orbit of 1")
    return RecognitionResult(tag, iso, inv, tuple(notes))


# --------------------------------------------------------------------------
# equivalence of root data


@dataclass(frozen=True)
class Equivalence:
    """Integer change of coordinates ``x -> x @ matrix`` from X1 to X2."""

    matrix: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...]

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) for x in la.vecmat(v, self.matrix))

    def inverted(self) -> "Equivalence":
        return Equivalence(self.inverse, self.matrix)


def _odd_coroot_key(d: RootDatum, g) -> la.Vec:
    return d.odd_coroot(g)


def _signature(d: RootDatum):
    return (d.rank, len(d.even_roots), sorted(m for _, m in d.odd_roots))


def equivalence_search(d1: RootDatum, d2: RootDatum) -> tuple[Equivalence | None, str]:
    """Backtracking search for an equivalence; returns (witness or None, reason)."""
    if d1.rank != d2.rank:
        return None, f"rank mismatch {d1.rank} != {d2.rank}"
    if _signature(d1) != _signature(d2):
        return None, "root count or multiplicity mismatch"
    r = d1.rank
    if r == 0:
        return Equivalence((), ()), "rank 0"
    par1 = {la.vec(e): EVEN for e in d1.even}
    par1.update({la.vec(g): "odd" for g in d1.odd})
    par2 = {la.vec(e): EVEN for e in d2.even}
    par2.update({la.vec(g): "odd" for g in d2.odd})
    mult1 = {la.vec(g): m for g, m in d1.odd_roots}
    mult2 = {la.vec(g): m for g, m in d2.odd_roots}
    co1 = {la.vec(e): la.vec(c) for e, c in d1.even_roots}
    co2 = {la.vec(e): la.vec(c) for e, c in d2.even_roots}

    nonzero = [v for v in sorted(par1) if not la.is_zero(v)]
    src = _connected_order(nonzero, d1.form)
    k = len(src)
    # complete to a basis of Q^r with unit vectors
    comp = []
    for j in range(r):
        if k + len(comp) == r:
            break
        e = la.vec(int(i == j) for i in range(r))
        if la.rank(src + comp + [e]) > k + len(comp):
            comp.append(e)
    full_src = src + comp
    src_inv = la.inverse(full_src)

    def key(v, pivot):
        return (v != pivot, v)

    def cartan_ok(i, c, images):
        b = src[i]
        for j in range(i + 1):
            bj = src[j] if j < i else b
            tj = images[j] if j < i else c
            if par1[b] == EVEN and d1.pair(bj, co1[b]) != d2.pair(tj, co2[c]):
                return False
            if par1[bj] == EVEN and d1.pair(b, co1[bj]) != d2.pair(c, co2[tj]):
                return False
        for j in range(i):
            for sign in (1, -1):
                u = la.add(b, la.scale(sign, src[j]))
                w = la.add(c, la.scale(sign, images[j]))
                if par1.get(u) != par2.get(w):
                    return False
        return True

    def finish(images) -> Equivalence | None:
        m = la.matmul(src_inv, images)
        if not all(la.is_integral(row) for row in m):
            return None
        if abs(la.det(m)) != 1:
            return None
        minv = la.inverse(m)
        seen = set()
        for v, p in par1.items():
            img = la.vecmat(v, m)
            if par2.get(img) != p or img in seen:
                return None
            seen.add(img)
            if p == EVEN:
                if la.matvec(m, co2[img]) != co1[v]:
                    return None
            else:
                if mult1[v] != mult2[img]:
                    return None
                if la.is_zero(v):
                    continue
                c1, c2 = d1.odd_coroot(v), la.matvec(m, d2.odd_coroot(img))
                if c2 != c1 and not (d1.form(v, v) == 0 and c2 == la.neg(c1)):
                    return None
        to_int = lambda a: tuple(tuple(int(x) for x in row) for row in a)  # noqa: E731
        return Equivalence(to_int(m), to_int(minv))

    box = [la.vec(v) for v in itertools.product((-1, 0, 1), repeat=r) if any(v)]

    def complete(images, j):
        if j == len(comp):
            return finish(images)
        seen = set()
        for c in [comp[j]] + box:
            if c in seen:
                continue
            seen.add(c)
            if la.rank(images + [c]) <= len(images):
                continue
            found = complete(images + [c], j + 1)
            if found is not None:
                return found
        return None

    cand = {p: sorted((v for v in par2 if par2[v] == p and not la.is_zero(v))) for p in (EVEN, "odd")}

    def search(i, images):
        if i == k:
            return complete(images, 0)
        b = src[i]
        for c in sorted(cand[par1[b]], key=lambda v: key(v, b)):
            if par1[b] != EVEN and mult1[b] != mult2[c]:
                continue
            if not cartan_ok(i, c, images):
                continue
            if la.rank(images + [c]) <= i:
                continue
            found = search(i + 1, images + [c])
            if found is not None:
                return found
        return None

    found = search(0, [])
    return (found, "witness found") if found else (None, "no root-preserving lattice map")


def equivalent(d1: RootDatum, d2: RootDatum) -> Equivalence | None:
    return equivalence_search(d1, d2)[0]


# --------------------------------------------------------------------------
# Weyl orbits


def weyl_orbit(datum: RootDatum, v: Sequence[int], cap: int = 10**6) -> frozenset[tuple[int, ...]]:
    """Closure of ``{v}`` under the even reflections."""
    start = tuple(int(x) for x in v)
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for a in datum.even:
            y = even_reflection(datum, a, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise OrbitTooLarge(f"orbit exceeds {cap} elements")
                queue.append(y)
    return frozenset(seen)
