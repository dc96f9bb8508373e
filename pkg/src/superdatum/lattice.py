"""Integer lattices, Smith normal form and exact rational forms.

A :class:`Lattice` is presented as a quotient ``Z^a / <relations>`` optionally
cut down to the common kernel of a few integer functionals (``constraints``).
Vectors are handed around in the lattice's own coordinates, a tuple of
``rank`` integers; :meth:`Lattice.coordinates` reduces any ambient
representative to those coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from . import _linalg as la

__all__ = [
    "TorsionError",
    "smith_normal_form",
    "invariant_factors",
    "Lattice",
    "free_lattice",
    "quotient_lattice",
    "sublattice",
    "lattice_direct_sum",
    "span_rank",
    "spans_lattice",
    "lattice_basis",
    "RationalForm",
    "DualityPairing",
    "gram_matrix",
]

IntMat = tuple[tuple[int, ...], ...]


class TorsionError(ValueError):
    """The quotient has a finite cyclic factor, so it is not a character lattice."""


def _ints(m: Matrix) -> IntMat:
    return tuple(tuple(int(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat, IntMat]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with
    ``d1 | d2 | ...`` and nonnegative entries.
    """
    rows = [list(map(int, r)) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if nrows == 0 or ncols == 0:
        return (
            tuple(tuple(int(i == j) for j in range(nrows)) for i in range(nrows)),
            tuple(tuple(0 for _ in range(ncols)) for _ in range(nrows)),
            tuple(tuple(int(i == j) for j in range(ncols)) for i in range(ncols)),
        )
    d, u, v = smith_normal_decomp(Matrix(rows))
    u, d, v = _ints(u), _ints(d), _ints(v)
    # sympy may return negative diagonal entries; absorb signs into U
    u = [list(r) for r in u]
    d = [list(r) for r in d]
    for i in range(min(nrows, ncols)):
        if d[i][i] < 0:
            d[i][i] = -d[i][i]
            u[i] = [-x for x in u[i]]
    return tuple(map(tuple, u)), tuple(map(tuple, d)), v


def invariant_factors(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, d, _ = smith_normal_form(m)
    return tuple(d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0)


def _int_inverse(m: IntMat) -> IntMat:
    inv = la.inverse(m)
    if not all(x.denominator == 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def _row_times(v: Sequence[int], m: IntMat) -> tuple[int, ...]:
    if not m:
        return ()
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


@dataclass(frozen=True)
class Lattice:
    """``Z^ambient_rank / <relations>``, restricted to ``ker(constraints)``."""

    ambient_rank: int
    relations: tuple[tuple[int, ...], ...] = ()
    constraints: tuple[tuple[int, ...], ...] = ()
    rank: int = field(init=False)
    _proj: IntMat = field(init=False, repr=False, compare=False)
    _lift: IntMat = field(init=False, repr=False, compare=False)
    _kbasis: IntMat = field(init=False, repr=False, compare=False)
    _kcoord: IntMat = field(init=False, repr=False, compare=False)
    _qfunc: IntMat = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = self.ambient_rank
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        cons = tuple(tuple(int(x) for x in c) for c in self.constraints)
        if any(len(r) != a for r in rels) or any(len(c) != a for c in cons):
            raise ValueError("relation/constraint length must equal the ambient rank")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constraints", cons)

        if rels:
            _, d, v = smith_normal_form(rels)
            diag = [d[i][i] for i in range(min(len(d), a))]
            if any(x > 1 for x in diag):
                bad = next(x for x in diag if x > 1)
                raise TorsionError(f"quotient has torsion Z/{bad}")
            s = sum(1 for x in diag if x != 0)
        else:
            v = tuple(tuple(int(i == j) for j in range(a)) for i in range(a))
            s = 0
        vinv = _int_inverse(v) if a else ()
        q = a - s
        proj = tuple(tuple(v[i][s + j] for j in range(q)) for i in range(a))
        lift = tuple(vinv[s + j] for j in range(q))  # rows: ambient reps of quotient basis
        object.__setattr__(self, "_proj", proj)
        object.__setattr__(self, "_lift", lift)

        if cons:
            for c in cons:
                for r in rels:
                    if sum(x * y for x, y in zip(c, r)) != 0:
                        raise ValueError("constraint does not vanish on the relations")
            qfunc = tuple(tuple(sum(c[k] * lift[j][k] for k in range(a)) for j in range(q)) for c in cons)
            _, d2, v2 = smith_normal_form(qfunc)
            t = sum(1 for i in range(min(len(d2), q)) if d2[i][i] != 0)
            v2inv = _int_inverse(v2) if q else ()
            kbasis = tuple(tuple(v2[i][t + j] for i in range(q)) for j in range(q - t))
            kcoord = tuple(v2inv[t + j] for j in range(q - t))
        else:
            qfunc = ()
            kbasis = tuple(tuple(int(i == j) for i in range(q)) for j in range(q))
            kcoord = kbasis
        object.__setattr__(self, "_qfunc", qfunc)
        object.__setattr__(self, "_kbasis", kbasis)
        object.__setattr__(self, "_kcoord", kcoord)
        object.__setattr__(self, "rank", len(kbasis))

    @property
    def is_free_presentation(self) -> bool:
        return not self.relations and not self.constraints

    def coordinates(self, v: Sequence) -> tuple[int, ...]:
        """Coordinates of an ambient representative (integer vector)."""
        if len(v) != self.ambient_rank:
            raise ValueError(f"expected {self.ambient_rank} ambient coordinates, got {len(v)}")
        fv = [Fraction(x) for x in v]
        if any(x.denominator != 1 for x in fv):
            raise ValueError("lattice vectors must be integral")
        iv = [int(x) for x in fv]
        q = _row_times(iv, self._proj) if self._proj else ()
        if self._qfunc:
            for f in self._qfunc:
                if sum(x * y for x, y in zip(f, q)) != 0:
                    raise ValueError(f"vector {tuple(iv)} is outside the sublattice")
        return tuple(sum(row[i] * q[i] for i in range(len(q))) for row in self._kcoord)

    def representative(self, coords: Sequence[int]) -> tuple[int, ...]:
        """An ambient integer vector with the given coordinates."""
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates")
        q = [0] * len(self._lift)
        for c, kb in zip(coords, self._kbasis):
            for i, x in enumerate(kb):
                q[i] += c * x
        out = [0] * self.ambient_rank
        for qi, row in zip(q, self._lift):
            for k, x in enumerate(row):
                out[k] += qi * x
        return tuple(out)

    def equal(self, u: Sequence, v: Sequence) -> bool:
        """Equality of two ambient representatives modulo the relations."""
        return self.coordinates(u) == self.coordinates(v)

    def basis(self) -> list[tuple[int, ...]]:
        """Ambient representatives of the coordinate basis."""
        return [self.representative(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def describe(self) -> str:
        if self.is_free_presentation:
            return f"Z^{self.ambient_rank}"
        parts = [f"Z^{self.ambient_rank}"]
        if self.relations:
            parts.append("/<" + ", ".join(la.fmt_vec(r) for r in self.relations) + ">")
        if self.constraints:
            parts.append(" cut by " + ", ".join(la.fmt_vec(c) for c in self.constraints) + " = 0")
        return "".join(parts) + f" (rank {self.rank})"


def free_lattice(rank: int) -> Lattice:
    return Lattice(rank)


def quotient_lattice(ambient_rank: int, relations: Iterable[Sequence[int]]) -> Lattice:
    """``Z^ambient_rank`` modulo the span of ``relations``; raises TorsionError."""
    return Lattice(ambient_rank, tuple(tuple(r) for r in relations))


def sublattice(lattice: Lattice, functionals: Iterable[Sequence[int]]) -> Lattice:
    """Common kernel of integer functionals given on ambient coordinates."""
    return Lattice(lattice.ambient_rank, lattice.relations, lattice.constraints + tuple(tuple(f) for f in functionals))


def lattice_direct_sum(parts: Sequence[Lattice]) -> Lattice:
    total = sum(p.ambient_rank for p in parts)
    rels, cons = [], []
    offset = 0
    for p in parts:
        pad = lambda r: (0,) * offset + tuple(r) + (0,) * (total - offset - p.ambient_rank)  # noqa: E731
        rels.extend(pad(r) for r in p.relations)
        cons.extend(pad(c) for c in p.constraints)
        offset += p.ambient_rank
    return Lattice(total, tuple(rels), tuple(cons))


def span_rank(vectors: Iterable[Sequence]) -> int:
    """Rank of the rational span."""
    vs = [tuple(v) for v in vectors]
    return la.rank(vs) if vs else 0


def spans_lattice(vectors: Iterable[Sequence[int]], rank: int) -> tuple[bool, tuple[int, ...]]:
    """Whether the integer span of ``vectors`` is all of ``Z^rank``.

    Returns the verdict together with the invariant factors of the span.
    """
    vs = [tuple(int(x) for x in v) for v in vectors]
    if rank == 0:
        return True, ()
    if not vs:
        return False, ()
    factors = invariant_factors(vs)
    return (len(factors) == rank and all(f == 1 for f in factors)), factors


def lattice_basis(vectors: Iterable[Sequence]) -> list[la.Vec]:
    """A basis of the integer span of rational vectors.

    Returns the standard basis when the span is exactly ``Z^d``.
    """
    vs = [la.vec(v) for v in vectors]
    if not vs:
        return []
    den = 1
    for v in vs:
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vs]
    _, d, v = smith_normal_form(rows)
    vinv = la.inverse(v)
    k = sum(1 for i in range(min(len(d), len(vs[0]))) if d[i][i] != 0)
    basis = [la.scale(Fraction(d[i][i], den), vinv[i]) for i in range(k)]
    n = len(vs[0])
    if k == n and all(la.is_integral(b) for b in basis) and abs(la.det(basis)) == 1:
        return list(la.identity(n))
    return basis


@dataclass(frozen=True)
class RationalForm:
    """Symmetric bilinear form with exact rational Gram matrix."""

    matrix: la.Mat

    def __post_init__(self):
        m = la.mat(self.matrix)
        n = len(m)
        if any(len(r) != n for r in m):
            raise ValueError("form matrix must be square")
        for i in range(n):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise ValueError(f"form is not symmetric at ({i}, {j})")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def diagonal(cls, entries: Iterable) -> "RationalForm":
        e = la.vec(entries)
        return cls(tuple(tuple(e[i] if i == j else Fraction(0) for j in range(len(e))) for i in range(len(e))))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, u: Sequence, v: Sequence) -> Fraction:
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("vector dimension does not match the form")
        return la.bilinear(self.matrix, u, v)

    def det(self) -> Fraction:
        return la.det(self.matrix) if self.dim else Fraction(1)

    def is_nondegenerate(self) -> bool:
        return self.det() != 0

    def radical(self) -> list[la.Vec]:
        return la.nullspace(self.matrix, self.dim)

    def apply(self, v: Sequence) -> la.Vec:
        """The functional ``(., v)`` as a coefficient vector."""
        return la.matvec(self.matrix, v)

    def restricted(self, basis: Sequence[Sequence]) -> "RationalForm":
        return RationalForm(gram_matrix(self, basis))

    def transformed(self, t: Sequence[Sequence]) -> "RationalForm":
        """Form in new coordinates ``y`` where ``x = y @ t`` (rows of ``t`` are new basis vectors)."""
        return RationalForm(la.matmul(la.matmul(t, self.matrix), la.transpose(t, len(self.matrix))))


@dataclass(frozen=True)
class DualityPairing:
    """Integer matrix ``P`` with ``<x, c> = x P c^T``."""

    matrix: IntMat

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(x) for x in r) for r in self.matrix))

    @classmethod
    def standard(cls, rank: int) -> "DualityPairing":
        return cls(tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    def __call__(self, x: Sequence, c: Sequence) -> Fraction:
        return la.bilinear(self.matrix, x, c)

    def is_standard(self) -> bool:
        return all(x == int(i == j) for i, r in enumerate(self.matrix) for j, x in enumerate(r))


def gram_matrix(form: RationalForm, vectors: Sequence[Sequence]) -> la.Mat:
    """Matrix of pairwise form values; raises ValueError on dimension mismatch."""
    vs = [la.vec(v) for v in vectors]
    for v in vs:
        if len(v) != form.dim:
            raise ValueError(f"vector of length {len(v)} does not match form of dimension {form.dim}")
    return tuple(tuple(form(u, v) for v in vs) for u in vs)
