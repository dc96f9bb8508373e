"""Exact rational linear algebra on nested tuples/lists of Fractions.

Matrices are sequences of rows.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def vec(xs: Iterable) -> Vec:
    return tuple(frac(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int) -> Mat:
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> Mat:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(tuple(col) for col in zip(*a))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    if not a:
        return ()
    bt = list(zip(*b)) if b else []
    if not bt:
        return tuple(() for _ in a)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def vecmat(v: Sequence, a: Sequence[Sequence]) -> Vec:
    if not a:
        return ()
    return tuple(sum((x * row[j] for x, row in zip(v, a)), Fraction(0)) for j in range(len(a[0])))


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def bilinear(form: Sequence[Sequence], u: Sequence, v: Sequence) -> Fraction:
    total = Fraction(0)
    for i, ui in enumerate(u):
        if ui:
            row = form[i]
            for j, vj in enumerate(v):
                if vj:
                    total += ui * row[j] * vj
    return total


def add(u: Sequence, v: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(u, v))


def scale(c, v: Sequence) -> Vec:
    c = frac(c)
    return tuple(c * x for x in v)


def neg(v: Sequence) -> Vec:
    return tuple(-x for x in v)


def is_zero(v: Sequence) -> bool:
    return not any(v)


def rref(a: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[frac(x) for x in row] for row in a]
    if not m:
        return [], []
    n = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Sequence[Sequence]) -> int:
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Basis of {x : A x = 0}."""
    if not a:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    r, pivots = rref(a, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(r, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def left_nullspace(a: Sequence[Sequence]) -> list[Vec]:
    """Basis of {y : y A = 0}."""
    return nullspace(transpose(a), len(a))


def det(a: Sequence[Sequence]) -> Fraction:
    m = [[frac(x) for x in row] for row in a]
    n = len(m)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        pv = m[c][c]
        result *= pv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a: Sequence[Sequence]) -> Mat:
    n = len(a)
    aug = [[frac(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(row[n:]) for row in r)


def solve_left(basis: Sequence[Sequence], v: Sequence) -> Vec | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span."""
    k = len(basis)
    if k == 0:
        return () if is_zero(v) else None
    # columns are basis vectors; augmented with v
    n = len(v)
    aug = [[basis[i][j] for i in range(k)] + [frac(v[j])] for j in range(n)]
    r, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    if len(pivots) < k:
        raise ValueError("basis vectors are linearly dependent")
    return tuple(row[k] for row in r)


def independent_subset(vectors: Sequence[Sequence]) -> list[int]:
    """Indices of a greedy maximal linearly independent subset, in input order."""
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    piv: list[int] = []
    for idx, v in enumerate(vectors):
        w = [frac(x) for x in v]
        for row, p in zip(echelon, piv):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        p = next((i for i, x in enumerate(w) if x != 0), None)
        if p is None:
            continue
        w = [x / w[p] for x in w]
        echelon.append(w)
        piv.append(p)
        chosen.append(idx)
    return chosen


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest integer vector positively proportional to a nonzero rational vector."""
    v = [frac(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive multiple")
    return tuple(x // g for x in ints)


def is_integral(v: Iterable) -> bool:
    return all(frac(x).denominator == 1 for x in v)


def fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Sequence) -> str:
    return "(" + ", ".join(fmt(frac(x)) for x in v) + ")"
