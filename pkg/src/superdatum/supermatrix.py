"""Finite Grassmann algebras, supermatrices over them, and the Berezinian."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "NotInvertible",
    "GeneratorMismatch",
    "GrassmannElement",
    "grassmann_mul",
    "generator",
    "SuperMatrix",
    "berezinian",
    "is_invertible",
    "random_supermatrix",
]


class NotInvertible(ValueError):
    pass


class GeneratorMismatch(ValueError):
    pass


def _sign(a: int, b: int) -> int:
    """Sign from reordering the monomial ``a * b`` into increasing generator order."""
    swaps = 0
    while b:
        low = b & -b
        # generators in a with larger index than this one must pass it
        swaps += bin(a & ~((low << 1) - 1)).count("1")
        b ^= low
    return -1 if swaps % 2 else 1


@dataclass(frozen=True)
class GrassmannElement:
    """Element of the Grassmann algebra on ``n`` generators.

    ``terms`` maps a bitmask (bit i = generator i+1) to its coefficient.
    """

    n: int
    terms: Mapping[int, Fraction]

    def __post_init__(self):
        limit = 1 << self.n
        clean = {}
        for mask, c in self.terms.items():
            if not 0 <= mask < limit:
                raise GeneratorMismatch(f"monomial {mask:b} uses more than {self.n} generators")
            c = Fraction(c)
            if c:
                clean[mask] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def const(cls, n: int, c=1) -> "GrassmannElement":
        return cls(n, {0: Fraction(c)})

    @classmethod
    def zero(cls, n: int) -> "GrassmannElement":
        return cls(n, {})

    @property
    def body(self) -> Fraction:
        return self.terms.get(0, Fraction(0))

    @property
    def soul(self) -> "GrassmannElement":
        return GrassmannElement(self.n, {m: c for m, c in self.terms.items() if m})

    def is_even(self) -> bool:
        return all(bin(m).count("1") % 2 == 0 for m in self.terms)

    def is_odd(self) -> bool:
        return all(bin(m).count("1") % 2 == 1 for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "GrassmannElement") -> None:
        if self.n != other.n:
            raise GeneratorMismatch(f"{self.n} generators vs {other.n}")

    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        return GrassmannElement.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return GrassmannElement(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return grassmann_mul(self, self._coerce(other))

    def __rmul__(self, other):
        return grassmann_mul(self._coerce(other), self)

    def __eq__(self, other):
        if isinstance(other, GrassmannElement):
            return self.n == other.n and self.terms == other.terms
        try:
            return self.terms == GrassmannElement.const(self.n, other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def inverse(self) -> "GrassmannElement":
        """Inverse via the terminating series ``b^-1 sum (-u/b)^k``."""
        b = self.body
        if b == 0:
            raise NotInvertible("body is zero")
        u = self.soul * (1 / b)
        term = GrassmannElement.const(self.n)
        total = GrassmannElement.const(self.n)
        for _ in range(self.n):
            term = term * (-u)
            if term.is_zero():
                break
            total = total + term
        return total * (1 / b)

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for mask, c in self.terms.items():
            mono = "*".join(f"t{i + 1}" for i in range(self.n) if mask >> i & 1)
            mag = abs(c)
            if not mono:
                piece = _fmt(mag)
            elif mag == 1:
                piece = mono
            else:
                piece = f"{_fmt(mag)}*{mono}"
            if not out:
                out = piece if c > 0 else f"-{piece}"
            else:
                out += f" + {piece}" if c > 0 else f" - {piece}"
        return out

    @classmethod
    def parse(cls, text: str, n: int) -> "GrassmannElement":
        """Inverse of ``str``: e.g. ``1 - 2/3*t1*t2 + t4``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Grassmann element")
        if s[0] not in "+-":
            s = "+" + s
        pieces = re.findall(r"[+-][^+-]+", s)
        if "".join(pieces) != s:
            raise ValueError(f"cannot parse Grassmann element {text!r}")
        out = cls.zero(n)
        for p in pieces:
            sign = -1 if p[0] == "-" else 1
            coeff = Fraction(sign)
            elem = cls.const(n)
            for f in p[1:].split("*"):
                m = re.fullmatch(r"t(\d+)", f)
                if m:
                    i = int(m.group(1))
                    if not 1 <= i <= n:
                        raise GeneratorMismatch(f"generator t{i} outside 1..{n}")
                    elem = elem * generator(n, i)
                elif re.fullmatch(r"\d+(/\d+)?", f):
                    coeff *= Fraction(f)
                else:
                    raise ValueError(f"bad factor {f!r} in {text!r}")
            out = out + elem * coeff
        return out


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def generator(n: int, i: int) -> GrassmannElement:
    """The generator theta_i (1-based)."""
    if not 1 <= i <= n:
        raise GeneratorMismatch(f"generator {i} outside 1..{n}")
    return GrassmannElement(n, {1 << (i - 1): Fraction(1)})


def grassmann_mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    a._check(b)
    out: dict[int, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            m = ma | mb
            out[m] = out.get(m, Fraction(0)) + _sign(ma, mb) * ca * cb
    return GrassmannElement(a.n, out)


Grid = tuple[tuple[GrassmannElement, ...], ...]


@dataclass(frozen=True)
class SuperMatrix:
    """Even supermatrix [[B1, B2], [B3, B4]] with B1 (m x m), B4 (n x n) even and B2, B3 odd."""

    m: int
    n: int
    entries: Grid

    def __post_init__(self):
        size = self.m + self.n
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"entries must be {size} x {size}")
        gens = {e.n for r in self.entries for e in r}
        if len(gens) > 1:
            raise GeneratorMismatch(f"entries use different generator counts {sorted(gens)}")
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                diagonal_block = (i < self.m) == (j < self.m)
                if diagonal_block and not e.is_even():
                    raise ValueError(f"entry ({i + 1},{j + 1}) must be even")
                if not diagonal_block and not e.is_odd():
                    raise ValueError(f"entry ({i + 1},{j + 1}) must be odd")

    @property
    def generators(self) -> int:
        return self.entries[0][0].n

    @classmethod
    def build(cls, m: int, n: int, rows: Iterable[Iterable], generators: int) -> "SuperMatrix":
        """Accepts GrassmannElements, numbers, or strings parsed by ``GrassmannElement.parse``."""
        def conv(x):
            if isinstance(x, GrassmannElement):
                return x
            if isinstance(x, str):
                return GrassmannElement.parse(x, generators)
            return GrassmannElement.const(generators, x)

        return cls(m, n, tuple(tuple(conv(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, m: int, n: int, generators: int) -> "SuperMatrix":
        size = m + n
        return cls.build(m, n, [[int(i == j) for j in range(size)] for i in range(size)], generators)

    def blocks(self):
        m = self.m
        e = self.entries
        b1 = [list(r[:m]) for r in e[:m]]
        b2 = [list(r[m:]) for r in e[:m]]
        b3 = [list(r[:m]) for r in e[m:]]
        b4 = [list(r[m:]) for r in e[m:]]
        return b1, b2, b3, b4

    def __matmul__(self, other: "SuperMatrix") -> "SuperMatrix":
        if (self.m, self.n) != (other.m, other.n):
            raise ValueError("block sizes differ")
        return SuperMatrix(self.m, self.n, tuple(map(tuple, _matmul(self.entries, other.entries))))


def _matmul(a, b):
    k = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(cols):
            acc = None
            for t in range(k):
                p = row[t] * b[t][j]
                acc = p if acc is None else acc + p
            new.append(acc)
        out.append(new)
    return out


def _det_even(mat, n_gen: int) -> GrassmannElement:
    """Determinant of a square matrix of even (hence central) Grassmann entries."""
    a = [list(r) for r in mat]
    size = len(a)
    det = GrassmannElement.const(n_gen)
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col].body != 0), None)
        if piv is None:
            # the body determinant vanishes, so the determinant is nilpotent: expand fully
            return _det_leibniz(mat, n_gen)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, size):
            f = a[r][col] * inv
            if f.is_zero():
                continue
            for c in range(col, size):
                a[r][c] = a[r][c] - f * a[col][c]
    return det


def _det_leibniz(mat, n_gen: int) -> GrassmannElement:
    from itertools import permutations

    size = len(mat)
    total = GrassmannElement.zero(n_gen)
    for perm in permutations(range(size)):
        inv = sum(1 for i in range(size) for j in range(i + 1, size) if perm[i] > perm[j])
        term = GrassmannElement.const(n_gen, -1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        total = total + term
    return total


def _inverse_even(mat, n_gen: int):
    """Inverse of an even matrix with invertible body, by Gauss-Jordan."""
    size = len(mat)
    a = [list(r) + [GrassmannElement.const(n_gen, int(i == j)) for j in range(size)] for i, r in enumerate(mat)]
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col].body != 0), None)
        if piv is None:
            raise NotInvertible("body of the block is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(size):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [r[size:] for r in a]


def _body_det(mat) -> Fraction:
    from . import _linalg as la

    if not mat:
        return Fraction(1)
    return la.det([[e.body for e in r] for r in mat])


def is_invertible(g: SuperMatrix) -> bool:
    b1, _, _, b4 = g.blocks()
    return _body_det(b1) != 0 and _body_det(b4) != 0


def berezinian(g: SuperMatrix) -> GrassmannElement:
    """``det(B1 - B2 B4^-1 B3) * det(B4)^-1``."""
    if not is_invertible(g):
        raise NotInvertible("a diagonal block has singular body")
    N = g.generators
    b1, b2, b3, b4 = g.blocks()
    if g.n == 0:
        return _det_even(b1, N)
    b4inv = _inverse_even(b4, N)
    schur = b1
    if g.m:
        corr = _matmul(_matmul(b2, b4inv), b3)
        schur = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(b1, corr)]
    top = _det_even(schur, N) if g.m else GrassmannElement.const(N)
    return top * _det_even(b4, N).inverse()


def random_supermatrix(m: int, n: int, generators: int, rng: random.Random, max_coeff: int = 3) -> SuperMatrix:
    """Invertible even supermatrix with small random coefficients."""
    evens = [mask for mask in range(1, 1 << generators) if bin(mask).count("1") % 2 == 0]
    odds = [mask for mask in range(1 << generators) if bin(mask).count("1") % 2 == 1]

    def rand_c():
        return Fraction(rng.randint(-max_coeff, max_coeff))

    def element(parity_odd: bool, body: Fraction) -> GrassmannElement:
        pool = odds if parity_odd else evens
        terms = {mask: rand_c() for mask in rng.sample(pool, min(len(pool), 2))}
        if not parity_odd:
            terms[0] = body
        return GrassmannElement(generators, terms)

    size = m + n
    while True:
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                odd = (i < m) != (j < m)
                row.append(element(odd, Fraction(0) if odd else rand_c()))
            rows.append(tuple(row))
        g = SuperMatrix(m, n, tuple(rows))
        if is_invertible(g):
            return g
