"""Finite-dimensional Lie superalgebras given by exact structure constants.

Elements are coordinate vectors in the algebra's basis.  Structure
constants are stored sparsely: ``table[(i, j)]`` lists ``(k, c)`` with
``[b_i, b_j] = sum c b_k``.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _linalg as la
from .catalog import FamilyTag, ParameterOutOfRange

__all__ = [
    "NotDiagonalizable",
    "IsotropicOrOdd",
    "DegenerateOnCartan",
    "SuperAlgebra",
    "BilinearForm",
    "InvariantForms",
    "RootDecomposition",
    "JacobiViolation",
    "from_matrices",
    "realize",
    "realize_gl",
    "realize_sl",
    "realize_osp",
    "realize_d21a",
    "quotient_center",
    "center",
    "double_odd",
    "check_jacobi",
    "root_decomposition",
    "invariant_forms",
    "supertrace_form",
    "sl2_triple",
    "cartan_element",
    "SEED_ENV",
    "DEFAULT_SEED",
    "seed",
]

SEED_ENV = "SUPERDATUM_SEED"
DEFAULT_SEED = 20240601


class NotDiagonalizable(ValueError):
    pass


class IsotropicOrOdd(ValueError):
    """The sl2 construction needs an even root."""


class DegenerateOnCartan(ValueError):
    pass


Table = Mapping[tuple[int, int], tuple[tuple[int, Fraction], ...]]


@dataclass(frozen=True)
class SuperAlgebra:
    labels: tuple[str, ...]
    parity: tuple[int, ...]
    table: Table
    cartan: tuple[int, ...] = ()
    name: str = ""
    # rows: values of each epsilon/delta coordinate on the Cartan basis
    frame: tuple[tuple[Fraction, ...], ...] | None = None
    matrices: tuple | None = field(default=None, compare=False, repr=False)
    even_size: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.labels)
        if len(self.parity) != n:
            raise ValueError("labels and parity differ in length")
        clean: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
        for (i, j), terms in self.table.items():
            merged: dict[int, Fraction] = {}
            for k, c in terms:
                merged[k] = merged.get(k, Fraction(0)) + Fraction(c)
            terms = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
            for k, _ in terms:
                if self.parity[k] != (self.parity[i] + self.parity[j]) % 2:
                    raise ValueError(f"[{self.labels[i]}, {self.labels[j]}] has a component of the wrong parity")
            if terms:
                clean[(i, j)] = terms
        for (i, j), terms in clean.items():
            sign = -1 if self.parity[i] and self.parity[j] else 1
            expected = tuple((k, -sign * c) for k, c in terms)
            if clean.get((j, i), ()) != expected:
                raise ValueError(f"super-antisymmetry fails on ({self.labels[i]}, {self.labels[j]})")
        object.__setattr__(self, "table", clean)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(self.parity)
        return self.dim - odd, odd

    def basis_vector(self, i: int) -> la.Vec:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def element(self, terms: Mapping[str, object] | Sequence) -> la.Vec:
        """Coordinate vector from ``{label: coefficient}`` or a plain sequence."""
        if isinstance(terms, Mapping):
            v = [Fraction(0)] * self.dim
            for lab, c in terms.items():
                v[self.index(lab)] += Fraction(c)
            return tuple(v)
        return la.vec(terms)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return dict(self.table.get((i, j), ()))

    def bracket(self, u: Sequence, v: Sequence) -> la.Vec:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                for k, c in self.table.get((i, j), ()):
                    out[k] += a * b * c
        return tuple(out)

    def ad(self, i: int) -> la.Mat:
        """Matrix of ad(b_i) acting on coordinate columns."""
        m = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for j in range(self.dim):
            for k, c in self.table.get((i, j), ()):
                m[k][j] = c
        return tuple(map(tuple, m))

    def describe(self, v: Sequence) -> str:
        out = ""
        for lab, c in zip(self.labels, v):
            if not c:
                continue
            c = Fraction(c)
            mag = lab if abs(c) == 1 else f"{la.fmt(abs(c))}*{lab}"
            if not out:
                out = mag if c > 0 else f"-{mag}"
            else:
                out += f" + {mag}" if c > 0 else f" - {mag}"
        return out or "0"

    def weight_of(self, theta: Sequence) -> la.Vec:
        """Convert a weight to Cartan eigenvalue coordinates.

        With a frame, a vector of frame length is read in epsilon/delta
        coordinates; otherwise it must already list values on the Cartan basis.
        """
        theta = la.vec(theta)
        if self.frame is not None and len(theta) == len(self.frame):
            return la.vecmat(theta, self.frame)
        if len(theta) == len(self.cartan):
            return theta
        raise ValueError(f"weight of length {len(theta)} fits neither the frame nor the Cartan")

    def with_bracket(self, i: int, j: int, terms: Iterable[tuple[int, object]]) -> "SuperAlgebra":
        """Copy with ``[b_i, b_j]`` replaced (and ``[b_j, b_i]`` adjusted)."""
        table = dict(self.table)
        terms = tuple((k, Fraction(c)) for k, c in terms)
        sign = -1 if self.parity[i] and self.parity[j] else 1
        table[(i, j)] = terms
        if i != j:
            table[(j, i)] = tuple((k, -sign * c) for k, c in terms)
        return SuperAlgebra(self.labels, self.parity, table, self.cartan, self.name + "*", self.frame)


# --------------------------------------------------------------------------
# sparse elimination


class _Eliminator:
    """Incremental exact row reduction of sparse linear equations."""

    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    def add(self, eq: Mapping[int, Fraction]) -> None:
        row = {k: Fraction(v) for k, v in eq.items() if v}
        while row:
            p = min(row)
            piv = self.rows.get(p)
            if piv is None:
                c = row[p]
                self.rows[p] = {k: v / c for k, v in row.items()}
                return
            c = row[p]
            for k, v in piv.items():
                nv = row.get(k, Fraction(0)) - c * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)

    def nullspace(self, nvars: int) -> list[dict[int, Fraction]]:
        # back-substitute to reduced form
        pivots = sorted(self.rows, reverse=True)
        reduced: dict[int, dict[int, Fraction]] = {}
        for p in pivots:
            row = dict(self.rows[p])
            for q in [k for k in row if k != p and k in reduced]:
                c = row.pop(q)
                for k, v in reduced[q].items():
                    if k == q:
                        continue
                    nv = row.get(k, Fraction(0)) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            reduced[p] = row
        free = [v for v in range(nvars) if v not in reduced]
        out = []
        for f in free:
            sol = {f: Fraction(1)}
            for p, row in reduced.items():
                c = row.get(f)
                if c:
                    sol[p] = -c
            out.append(sol)
        return out


# --------------------------------------------------------------------------
# matrix realizations


def _zero(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _unit(n, a, b, c=1):
    m = _zero(n)
    m[a][b] = Fraction(c)
    return m


def _mm(a, b):
    n = len(a)
    out = _zero(n)
    for i in range(n):
        ai = a[i]
        for k in range(n):
            if ai[k]:
                x = ai[k]
                bk = b[k]
                for j in range(n):
                    if bk[j]:
                        out[i][j] += x * bk[j]
    return out


def _flat(m):
    return [x for row in m for x in row]


def from_matrices(
    labels: Sequence[str],
    parity: Sequence[int],
    mats: Sequence,
    even_size: int,
    cartan: Sequence[int] = (),
    name: str = "",
    frame=None,
) -> SuperAlgebra:
    """Structure constants of a matrix superalgebra under the supercommutator."""
    n = len(mats[0])
    flats = [_flat(m) for m in mats]
    # matrix entries whose values determine the coordinates of a span element
    ent = la.independent_subset([tuple(f[e] for f in flats) for e in range(n * n)])
    if len(ent) != len(flats):
        raise ValueError("basis matrices are linearly dependent")
    sub = [[flats[b][e] for b in range(len(flats))] for e in ent]
    sub_inv = la.inverse(sub)

    def coords(m):
        f = _flat(m)
        c = la.matvec(sub_inv, [f[e] for e in ent])
        recon = [sum((c[b] * flats[b][e] for b in range(len(flats)) if c[b]), Fraction(0)) for e in range(n * n)]
        if recon != f:
            raise ValueError("bracket leaves the span of the basis")
        return c

    table = {}
    for i, j in itertools.product(range(len(mats)), repeat=2):
        ab = _mm(mats[i], mats[j])
        ba = _mm(mats[j], mats[i])
        sign = -1 if parity[i] and parity[j] else 1
        br = [[x - sign * y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]
        if any(any(r) for r in br):
            c = coords(br)
            table[(i, j)] = tuple((k, x) for k, x in enumerate(c) if x)
    return SuperAlgebra(
        tuple(labels),
        tuple(parity),
        table,
        tuple(cartan),
        name,
        frame,
        tuple(tuple(map(tuple, m)) for m in mats),
        even_size,
    )


def _lab(i, j):
    return f"E{i + 1}{j + 1}" if max(i, j) < 9 else f"E{i + 1},{j + 1}"


def realize_gl(m: int, n: int) -> SuperAlgebra:
    FamilyTag("gl", (m, n))
    d = m + n
    labels, parity, mats, cartan = [], [], [], []
    for i in range(d):
        for j in range(d):
            labels.append(_lab(i, j))
            parity.append(int((i < m) != (j < m)))
            mats.append(_unit(d, i, j))
            if i == j:
                cartan.append(len(mats) - 1)
    frame = tuple(tuple(Fraction(int(a == b)) for b in range(d)) for a in range(d))
    return from_matrices(labels, parity, mats, m, cartan, f"gl({m}|{n})", frame)


def realize_sl(m: int, n: int) -> SuperAlgebra:
    """Supertrace-zero matrices; for m = n this keeps the center."""
    if m < 1 or n < 1:
        raise ParameterOutOfRange("sl(m|n) needs m, n >= 1")
    d = m + n
    labels, parity, mats = [], [], []
    for i in range(d):
        for j in range(d):
            if i != j:
                labels.append(_lab(i, j))
                parity.append(int((i < m) != (j < m)))
                mats.append(_unit(d, i, j))
    cartan, diag = [], []
    st = [1 if i < m else -1 for i in range(d)]
    for k in range(d - 1):
        h = _zero(d)
        h[k][k] = Fraction(1)
        h[k + 1][k + 1] = Fraction(-st[k], st[k + 1])
        labels.append(f"h{k + 1}")
        parity.append(0)
        mats.append(h)
        cartan.append(len(mats) - 1)
        diag.append([h[a][a] for a in range(d)])
    frame = tuple(tuple(diag[c][a] for c in range(d - 1)) for a in range(d))
    return from_matrices(labels, parity, mats, m, cartan, f"sl({m}|{n})", frame)


def realize_osp(big: int, two_n: int) -> SuperAlgebra:
    """osp(M|2n) preserving an even supersymmetric form.

    Even basis ``e_1..e_m, [e_0], e_-m..e_-1`` with ``B(e_i, e_-i) = 1``;
    odd basis ``f_1..f_n, f_-1..f_-n`` with ``B(f_j, f_-j) = 1 = -B(f_-j, f_j)``.
    """
    if two_n % 2 or two_n < 2 or big < 0:
        raise ParameterOutOfRange(f"osp({big}|{two_n}) is out of range")
    mm, n = big // 2, two_n // 2
    odd_m = big % 2
    d = big + two_n
    # index layout
    e_pos = list(range(mm))
    e_zero = [mm] if odd_m else []
    e_neg = [big - 1 - i for i in range(mm)]  # e_-i sits mirrored
    f_pos = [big + j for j in range(n)]
    f_neg = [big + n + j for j in range(n)]
    form = _zero(d)
    for i in range(mm):
        form[e_pos[i]][e_neg[i]] = form[e_neg[i]][e_pos[i]] = Fraction(1)
    for z in e_zero:
        form[z][z] = Fraction(1)
    for j in range(n):
        form[f_pos[j]][f_neg[j]] = Fraction(1)
        form[f_neg[j]][f_pos[j]] = Fraction(-1)
    vpar = [0] * big + [1] * two_n

    # diagonal weight of each standard basis vector in (eps_1..eps_m, delta_1..delta_n)
    r = mm + n
    wt = [[0] * r for _ in range(d)]
    for i in range(mm):
        wt[e_pos[i]][i] = 1
        wt[e_neg[i]][i] = -1
    for j in range(n):
        wt[f_pos[j]][mm + j] = 1
        wt[f_neg[j]][mm + j] = -1

    # X in osp  <=>  B(Xu, v) + (-1)^{|X||u|} B(u, Xv) = 0 for basis u, v
    blocks: dict[tuple, list[tuple[int, int]]] = {}
    for a in range(d):
        for b in range(d):
            w = tuple(x - y for x, y in zip(wt[a], wt[b]))
            p = (vpar[a] + vpar[b]) % 2
            blocks.setdefault((p, w), []).append((a, b))

    labels, parity, mats, cartan = [], [], [], []
    zero_w = tuple([0] * r)
    for (p, w), cells in sorted(blocks.items()):
        idx = {cell: k for k, cell in enumerate(cells)}
        eqs = []
        for u in range(d):
            for v in range(d):
                # X = sum x_k E_{cell_k};  B(Xu, v) = sum_a X[a][u] B(a, v)
                eq = {}
                for (a, b), k in idx.items():
                    if b == u and form[a][v]:
                        eq[k] = eq.get(k, 0) + form[a][v]
                    if b == v and form[u][a]:
                        s = -1 if p and vpar[u] else 1
                        eq[k] = eq.get(k, 0) + s * form[u][a]
                if any(eq.values()):
                    eqs.append([Fraction(eq.get(k, 0)) for k in range(len(cells))])
        sols = la.nullspace(eqs, len(cells)) if eqs else [
            tuple(Fraction(int(i == j)) for j in range(len(cells))) for i in range(len(cells))
        ]
        if w == zero_w and p == 0:
            sols = []
            for i in range(mm):
                sols.append({(e_pos[i], e_pos[i]): 1, (e_neg[i], e_neg[i]): -1})
            for j in range(n):
                sols.append({(f_pos[j], f_pos[j]): 1, (f_neg[j], f_neg[j]): -1})
            for k, s in enumerate(sols):
                mat = _zero(d)
                for (a, b), c in s.items():
                    mat[a][b] = Fraction(c)
                labels.append(f"h{k + 1}" if k < mm else f"k{k - mm + 1}")
                parity.append(0)
                mats.append(mat)
                cartan.append(len(mats) - 1)
            continue
        for s in sols:
            mat = _zero(d)
            for (a, b), k in idx.items():
                mat[a][b] = s[k]
            labels.append(f"{'Y' if p else 'X'}{_wlabel(w)}")
            parity.append(p)
            mats.append(mat)
    frame = tuple(tuple(Fraction(int(a == b)) for b in range(r)) for a in range(r))
    return from_matrices(labels, parity, mats, big, cartan, f"osp({big}|{two_n})", frame)


def _wlabel(w):
    return "[" + ";".join(str(x) for x in w) + "]"


def realize_d21a(alpha=None, sigma: Sequence | None = None) -> SuperAlgebra:
    """sl2 x sl2 x sl2 plus the triple tensor product of the 2-dim modules.

    The odd bracket is ``sum_i sigma_i * (product of the two other psi) * P_i``
    with ``P(u, w) z = psi(u, z) w + psi(w, z) u``.  ``sigma`` defaults to
    ``(-(1 + alpha), 1, alpha)``; Jacobi holds iff the entries sum to zero.
    """
    if sigma is None:
        a = Fraction(alpha)
        if a == 0:
            raise ParameterOutOfRange("alpha must be nonzero")
        sigma = (-(1 + a), Fraction(1), a)
        name = f"D21a({la.fmt(a)})"
    else:
        name = "D21a[" + ",".join(la.fmt(Fraction(s)) for s in sigma) + "]"
    sigma = [Fraction(s) for s in sigma]
    labels, parity = [], []
    for i in range(3):
        labels += [f"e{i + 1}", f"h{i + 1}", f"f{i + 1}"]
        parity += [0, 0, 0]
    signs = list(itertools.product((1, -1), repeat=3))
    for s in signs:
        labels.append("v" + "".join("+" if x > 0 else "-" for x in s))
        parity.append(1)
    odd0 = 9
    vidx = {s: odd0 + k for k, s in enumerate(signs)}
    # sl2 on V = span(v+, v-): e v- = v+, f v+ = v-, h v+- = +-v+-
    E = {1: {}, -1: {1: 1}}
    F = {1: {-1: 1}, -1: {}}
    H = {1: {1: 1}, -1: {-1: -1}}
    table: dict[tuple[int, int], list] = {}

    def put(i, j, terms):
        table.setdefault((i, j), []).extend(terms)

    for i in range(3):
        e, h, f = 3 * i, 3 * i + 1, 3 * i + 2
        put(h, e, [(e, 2)])
        put(e, h, [(e, -2)])
        put(h, f, [(f, -2)])
        put(f, h, [(f, 2)])
        put(e, f, [(h, 1)])
        put(f, e, [(h, -1)])
        for s in signs:
            for op, x in ((E, e), (H, h), (F, f)):
                for t, c in op[s[i]].items():
                    s2 = list(s)
                    s2[i] = t
                    put(x, vidx[s], [(vidx[tuple(s2)], c)])
                    put(vidx[s], x, [(vidx[tuple(s2)], -c)])

    def psi(a, b):
        return 1 if (a, b) == (1, -1) else -1 if (a, b) == (-1, 1) else 0

    def P(u, w, i):
        """P(u, w) as a combination of (e_i, h_i, f_i)."""
        mat = {}
        for z in (1, -1):
            for tgt, c in ((w, psi(u, z)), (u, psi(w, z))):
                if c:
                    mat[(tgt, z)] = mat.get((tgt, z), 0) + c
        # mat[(row, col)] in basis (v+, v-); decompose into e, h, f
        a = mat.get((1, 1), 0)
        b = mat.get((1, -1), 0)
        c = mat.get((-1, 1), 0)
        terms = []
        if b:
            terms.append((3 * i, b))
        if a:
            terms.append((3 * i + 1, a))
        if c:
            terms.append((3 * i + 2, c))
        return terms

    for s in signs:
        for t in signs:
            terms = []
            for i in range(3):
                others = [k for k in range(3) if k != i]
                coeff = sigma[i] * psi(s[others[0]], t[others[0]]) * psi(s[others[1]], t[others[1]])
                if coeff:
                    terms += [(k, coeff * c) for k, c in P(s[i], t[i], i)]
            if terms:
                put(vidx[s], vidx[t], terms)
    cartan = (1, 4, 7)
    frame = tuple(tuple(Fraction(int(a == b)) for b in range(3)) for a in range(3))
    return SuperAlgebra(tuple(labels), tuple(parity), {k: tuple(v) for k, v in table.items()}, cartan, name, frame)


def realize(family: FamilyTag | str) -> SuperAlgebra:
    tag = FamilyTag.parse(family) if isinstance(family, str) else family
    f, p = tag.family, tag.params
    if f == "gl":
        return realize_gl(*p)
    if f == "sl":
        return realize_sl(*p)
    if f == "sltilde":
        return quotient_center(realize_sl(*p))
    if f in ("B", "C", "D"):
        return realize_osp(*tag.osp_shape)
    if f == "D21a":
        return realize_d21a(p[0])
    raise ParameterOutOfRange(f"structure constants for {tag} are not implemented")


# --------------------------------------------------------------------------
# Jacobi


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[str, str, str]
    defect: la.Vec

    def __str__(self):
        return "Jacobi fails on (" + ", ".join(self.triple) + ")"


def _br_vec_basis(sa: SuperAlgebra, v: Mapping[int, Fraction], j: int, left: bool) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, a in v.items():
        key = (i, j) if left else (j, i)
        for k, c in sa.table.get(key, ()):
            out[k] = out.get(k, Fraction(0)) + a * c
    return {k: c for k, c in out.items() if c}


def check_jacobi(sa: SuperAlgebra) -> JacobiViolation | None:
    """First basis triple violating ``[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]``."""
    n = sa.dim
    for x in range(n):
        for y in range(n):
            xy = sa.bracket_basis(x, y)
            sign = -1 if sa.parity[x] and sa.parity[y] else 1
            for z in range(n):
                if not xy and (y, z) not in sa.table and (x, z) not in sa.table:
                    continue
                lhs = _br_vec_basis(sa, sa.bracket_basis(y, z), x, left=False)
                r1 = _br_vec_basis(sa, xy, z, left=True)
                r2 = _br_vec_basis(sa, sa.bracket_basis(x, z), y, left=False)
                keys = set(lhs) | set(r1) | set(r2)
                defect = {k: lhs.get(k, 0) - r1.get(k, 0) - sign * r2.get(k, 0) for k in keys}
                if any(defect.values()):
                    vec = tuple(Fraction(defect.get(k, 0)) for k in range(n))
                    return JacobiViolation((sa.labels[x], sa.labels[y], sa.labels[z]), vec)
    return None


# --------------------------------------------------------------------------
# center and quotient


def _center_basis(sa: SuperAlgebra) -> list[la.Vec]:
    out = []
    for p in (0, 1):
        idx = [i for i in range(sa.dim) if sa.parity[i] == p]
        el = _Eliminator()
        for j in range(sa.dim):
            eqs: dict[int, dict[int, Fraction]] = {}
            for col, i in enumerate(idx):
                for k, c in sa.table.get((i, j), ()):
                    eqs.setdefault(k, {})[col] = c
            for eq in eqs.values():
                el.add(eq)
        for sol in el.nullspace(len(idx)):
            v = [Fraction(0)] * sa.dim
            for col, c in sol.items():
                v[idx[col]] = c
            out.append(tuple(v))
    return out


def center(sa: SuperAlgebra) -> list[la.Vec]:
    """Homogeneous basis of the center."""
    return _center_basis(sa)


def quotient_center(sa: SuperAlgebra) -> SuperAlgebra:
    z = _center_basis(sa)
    if not z:
        return sa
    # keep basis elements independent of the center, preferring non-Cartan ones last
    order = [i for i in range(sa.dim) if i not in sa.cartan] + list(sa.cartan)
    keep: list[int] = []
    span = list(z)
    for i in order:
        v = sa.basis_vector(i)
        if la.rank(span + [v]) > len(span):
            span.append(v)
            keep.append(i)
    keep.sort()
    basis = [sa.basis_vector(i) for i in keep] + z
    binv = la.inverse(basis)
    pos = {i: k for k, i in enumerate(keep)}

    def reduce(vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        full = [Fraction(0)] * sa.dim
        for k, c in vec.items():
            full[k] = c
        coords = la.vecmat(full, binv)
        return {q: coords[q] for q in range(len(keep)) if coords[q]}

    table = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            r = reduce(sa.bracket_basis(i, j))
            if r:
                table[(a, b)] = tuple(r.items())
    cartan = tuple(pos[i] for i in sa.cartan if i in pos)
    return SuperAlgebra(
        tuple(sa.labels[i] for i in keep),
        tuple(sa.parity[i] for i in keep),
        table,
        cartan,
        f"{sa.name}/center",
        None,
    )


def double_odd(sa: SuperAlgebra) -> SuperAlgebra:
    """Same even part, two copies of the odd part with zero brackets between copies."""
    even = [i for i in range(sa.dim) if sa.parity[i] == 0]
    odd = [i for i in range(sa.dim) if sa.parity[i] == 1]
    new_index = {}
    labels, parity = [], []
    for i in even:
        new_index[(i, 0)] = len(labels)
        labels.append(sa.labels[i])
        parity.append(0)
    for copy in (1, 2):
        for i in odd:
            new_index[(i, copy)] = len(labels)
            labels.append(sa.labels[i] + "'" * copy)
            parity.append(1)

    def slots(i):
        return [(i, 0)] if sa.parity[i] == 0 else [(i, 1), (i, 2)]

    table = {}
    for (i, j), terms in sa.table.items():
        for si in slots(i):
            for sj in slots(j):
                ci, cj = si[1], sj[1]
                if ci and cj and ci != cj:
                    continue
                copy = ci or cj
                out = []
                for k, c in terms:
                    tgt = (k, 0) if sa.parity[k] == 0 else (k, copy)
                    out.append((new_index[tgt], c))
                table[(new_index[si], new_index[sj])] = tuple(out)
    cartan = tuple(new_index[(i, 0)] for i in sa.cartan)
    return SuperAlgebra(tuple(labels), tuple(parity), table, cartan, f"double_odd({sa.name})", sa.frame)


# --------------------------------------------------------------------------
# root decomposition


@dataclass(frozen=True)
class RootDecomposition:
    """Weights in Cartan eigenvalue coordinates mapped to (even_dim, odd_dim)."""

    spaces: Mapping[la.Vec, tuple[int, int]]
    vectors: Mapping[la.Vec, tuple[la.Vec, ...]]

    @property
    def roots(self) -> dict[la.Vec, tuple[int, int]]:
        return {w: d for w, d in self.spaces.items() if not la.is_zero(w)}

    @property
    def monodromy(self) -> bool:
        return all(e + o == 1 for e, o in self.roots.values())

    def even_roots(self) -> set[la.Vec]:
        return {w for w, (e, _) in self.roots.items() if e}

    def odd_roots(self) -> set[la.Vec]:
        return {w for w, (_, o) in self.roots.items() if o}


def root_decomposition(sa: SuperAlgebra) -> RootDecomposition:
    n = sa.dim
    diag = True
    for h in sa.cartan:
        for (i, j), terms in sa.table.items():
            if i == h and any(k != j for k, _ in terms):
                diag = False
                break
        if not diag:
            break
    groups: dict[la.Vec, list[la.Vec]] = {}
    if diag:
        for j in range(n):
            w = tuple(sa.bracket_basis(h, j).get(j, Fraction(0)) for h in sa.cartan)
            groups.setdefault(w, []).append(sa.basis_vector(j))
    else:
        groups = _eigenspaces(sa)
    spaces, vectors = {}, {}
    for w, vs in groups.items():
        ev = sum(1 for v in vs if _parity_of(sa, v) == 0)
        spaces[w] = (ev, len(vs) - ev)
        vectors[w] = tuple(vs)
    return RootDecomposition(spaces, vectors)


def _parity_of(sa: SuperAlgebra, v) -> int:
    ps = {sa.parity[i] for i, c in enumerate(v) if c}
    if len(ps) > 1:
        raise ValueError("vector is not homogeneous")
    return ps.pop() if ps else 0


def _eigenspaces(sa: SuperAlgebra) -> dict[la.Vec, list[la.Vec]]:
    """Common eigenspaces of the Cartan via a generic combination (sympy fallback)."""
    from sympy import Matrix, Rational

    n = sa.dim
    weights_ = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    combo = [[Fraction(0)] * n for _ in range(n)]
    for t, h in enumerate(sa.cartan):
        a = sa.ad(h)
        c = weights_[t % len(weights_)] + t
        for i in range(n):
            for j in range(n):
                combo[i][j] += c * a[i][j]
    out: dict[la.Vec, list[la.Vec]] = {}
    for p in (0, 1):
        idx = [i for i in range(n) if sa.parity[i] == p]
        if not idx:
            continue
        sub = Matrix([[Rational(combo[i][j].numerator, combo[i][j].denominator) for j in idx] for i in idx])
        total = 0
        for ev, mult, vecs in sub.eigenvects():
            if not ev.is_rational:
                raise NotDiagonalizable(f"irrational eigenvalue {ev}")
            total += len(vecs)
            for vec in vecs:
                full = [Fraction(0)] * n
                for pos, i in enumerate(idx):
                    x = vec[pos]
                    full[i] = Fraction(int(x.p), int(x.q))
                full = tuple(full)
                w = []
                for h in sa.cartan:
                    img = sa.bracket(sa.basis_vector(h), full)
                    k = next(i for i, x in enumerate(full) if x)
                    lam = img[k] / full[k]
                    if la.scale(lam, full) != img:
                        raise NotDiagonalizable("Cartan does not act by scalars on a common eigenspace")
                    w.append(lam)
                out.setdefault(tuple(w), []).append(full)
        if total != len(idx):
            raise NotDiagonalizable("adjoint Cartan action is not diagonalizable")
    return out


# --------------------------------------------------------------------------
# bilinear forms


@dataclass(frozen=True)
class BilinearForm:
    matrix: la.Mat

    def __call__(self, u, v) -> Fraction:
        return la.bilinear(self.matrix, u, v)

    def det(self) -> Fraction:
        return la.det(self.matrix) if self.matrix else Fraction(1)

    def is_nondegenerate(self) -> bool:
        return self.det() != 0

    def violations(self, sa: SuperAlgebra) -> list[str]:
        """Evenness, super-symmetry and invariance failures on basis elements."""
        out = []
        n, m, p = sa.dim, self.matrix, sa.parity
        for i in range(n):
            for j in range(n):
                if p[i] != p[j] and m[i][j]:
                    out.append(f"not even at ({sa.labels[i]}, {sa.labels[j]})")
                s = -1 if p[i] and p[j] else 1
                if m[i][j] != s * m[j][i]:
                    out.append(f"not super-symmetric at ({sa.labels[i]}, {sa.labels[j]})")
        for x in range(n):
            for y in range(n):
                xy = sa.bracket_basis(x, y)
                for z in range(n):
                    lhs = sum((c * m[k][z] for k, c in xy.items()), Fraction(0))
                    rhs = sum((c * m[x][k] for k, c in sa.table.get((y, z), ())), Fraction(0))
                    if lhs != rhs:
                        out.append(f"not invariant at ({sa.labels[x]}, {sa.labels[y]}, {sa.labels[z]})")
        return out


def supertrace_form(sa: SuperAlgebra) -> BilinearForm:
    """``str(xy)`` for algebras realized by matrices."""
    if sa.matrices is None or sa.even_size is None:
        raise ValueError(f"{sa.name} carries no matrix realization")
    m = sa.even_size
    n = sa.dim
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            prod = _mm(sa.matrices[i], sa.matrices[j])
            out[i][j] = sum(prod[k][k] for k in range(m)) - sum(prod[k][k] for k in range(m, len(prod)))
    return BilinearForm(tuple(map(tuple, out)))


@dataclass(frozen=True)
class InvariantForms:
    basis: tuple[BilinearForm, ...]
    witness: BilinearForm | None
    certificate: str | None = None

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _form_unknowns(sa: SuperAlgebra):
    """Variables for B(i, j): even pairs with i <= j, odd pairs with i < j."""
    var = {}
    for i in range(sa.dim):
        for j in range(i, sa.dim):
            if sa.parity[i] != sa.parity[j]:
                continue
            if sa.parity[i] and i == j:
                continue
            var[(i, j)] = len(var)
    return var


def _entry(sa, var, i, j):
    """(variable, sign) for B(b_i, b_j), or None if forced zero."""
    if sa.parity[i] != sa.parity[j]:
        return None
    if i <= j:
        v = var.get((i, j))
        return (v, 1) if v is not None else None
    v = var.get((j, i))
    if v is None:
        return None
    return (v, -1 if sa.parity[i] else 1)


def seed() -> int:
    """Seed for randomized searches, overridable through the environment."""
    return int(os.environ.get(SEED_ENV, DEFAULT_SEED))


def invariant_forms(sa: SuperAlgebra) -> InvariantForms:
    """All even super-symmetric invariant forms, plus a non-degenerate member if one exists.

    When no basis form or seeded random combination is non-degenerate, the
    determinant of the generic member is shown to vanish identically.  It
    has degree at most ``dim`` in each coefficient, so vanishing on a grid
    ``S^k`` with ``|S| = dim + 1`` proves it is the zero polynomial.
    """
    var = _form_unknowns(sa)
    el = _Eliminator()
    n = sa.dim
    for x in range(n):
        for y in range(n):
            xy = sa.bracket_basis(x, y)
            for z in range(n):
                eq: dict[int, Fraction] = {}
                for k, c in xy.items():
                    e = _entry(sa, var, k, z)
                    if e:
                        eq[e[0]] = eq.get(e[0], Fraction(0)) + c * e[1]
                for k, c in sa.table.get((y, z), ()):
                    e = _entry(sa, var, x, k)
                    if e:
                        eq[e[0]] = eq.get(e[0], Fraction(0)) - c * e[1]
                if eq:
                    el.add(eq)
    basis = []
    for sol in el.nullspace(len(var)):
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                e = _entry(sa, var, i, j)
                if e and e[0] in sol:
                    m[i][j] = sol[e[0]] * e[1]
        basis.append(BilinearForm(tuple(map(tuple, m))))
    basis = tuple(basis)
    if not basis:
        return InvariantForms(basis, None, "only the zero form is invariant")
    for b in basis:
        if b.is_nondegenerate():
            return InvariantForms(basis, b)
    rng = random.Random(seed())
    for _ in range(n + 1):
        coeffs = [Fraction(rng.randint(-50, 50), rng.randint(1, 7)) for _ in basis]
        w = _combine(basis, coeffs)
        if w.is_nondegenerate():
            return InvariantForms(basis, w)
    return InvariantForms(basis, None, _zero_certificate(basis, n))


def _combine(basis, coeffs) -> BilinearForm:
    n = len(basis[0].matrix)
    m = [[sum((c * b.matrix[i][j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(n)] for i in range(n)]
    return BilinearForm(tuple(map(tuple, m)))


def _zero_certificate(basis, n) -> str:
    k = len(basis)
    grid = range(n + 1)
    if (n + 1) ** k <= 200_000:
        for point in itertools.product(grid, repeat=k):
            if _combine(basis, point).is_nondegenerate():
                raise AssertionError("grid point with nonzero determinant missed by the random search")
        return f"det vanishes on the grid {{0..{n}}}^{k}; degree <= {n} per variable, so it is identically zero"
    from sympy import Matrix, symbols

    ts = symbols(f"t0:{k}")
    mat = Matrix(n, n, lambda i, j: sum(t * int(b.matrix[i][j].numerator) / int(b.matrix[i][j].denominator) for t, b in zip(ts, basis)))
    if mat.det(method="berkowitz").expand() != 0:
        raise AssertionError("symbolic determinant is nonzero")
    return f"symbolic determinant in {k} coefficients expands to 0"


# --------------------------------------------------------------------------
# sl2 triples and Cartan elements


def _cartan_coords(sa: SuperAlgebra, v) -> la.Vec:
    """Coordinates of v on the Cartan basis; raises if v leaves the Cartan."""
    for i, c in enumerate(v):
        if c and i not in sa.cartan:
            raise ValueError(f"{sa.describe(v)} is not in the Cartan subalgebra")
    return tuple(v[i] for i in sa.cartan)


def _root_vector(sa: SuperAlgebra, dec: RootDecomposition, w: la.Vec) -> la.Vec:
    vs = dec.vectors.get(w)
    if not vs:
        raise ValueError(f"{la.fmt_vec(w)} is not a weight")
    if len(vs) != 1:
        raise ValueError(f"root space of {la.fmt_vec(w)} has dimension {len(vs)}")
    return vs[0]


def sl2_triple(sa: SuperAlgebra, alpha: Sequence) -> tuple[la.Vec, la.Vec, la.Vec]:
    """(e, h, f) with e in g_alpha, f in g_-alpha, h = [e, f] and alpha(h) = 2."""
    w = sa.weight_of(alpha)
    dec = root_decomposition(sa)
    if w not in dec.spaces or la.is_zero(w):
        raise ValueError(f"{la.fmt_vec(alpha)} is not a root")
    ev, od = dec.spaces[w]
    if od or not ev:
        raise IsotropicOrOdd(f"{la.fmt_vec(alpha)} is an odd root")
    e = _root_vector(sa, dec, w)
    f = _root_vector(sa, dec, la.neg(w))
    h = sa.bracket(e, f)
    val = la.dot(w, _cartan_coords(sa, h))
    if val == 0:
        raise IsotropicOrOdd(f"alpha([e, f]) = 0 for {la.fmt_vec(alpha)}")
    f = la.scale(Fraction(2) / val, f)
    return e, sa.bracket(e, f), f


def cartan_element(sa: SuperAlgebra, form: BilinearForm, theta: Sequence) -> la.Vec:
    """The Cartan element H with ``form(H, h) = theta(h)`` for every Cartan h."""
    w = sa.weight_of(theta)
    k = [[form.matrix[i][j] for j in sa.cartan] for i in sa.cartan]
    if sa.cartan and la.det(k) == 0:
        raise DegenerateOnCartan("form restricted to the Cartan is degenerate")
    if not sa.cartan:
        return tuple(Fraction(0) for _ in range(sa.dim))
    x = la.matvec(la.inverse(k), w)
    out = [Fraction(0)] * sa.dim
    for c, i in zip(x, sa.cartan):
        out[i] = c
    return tuple(out)
