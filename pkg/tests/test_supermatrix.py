import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdatum import _linalg as la
from superdatum.supermatrix import (
    GeneratorMismatch,
    GrassmannElement,
    NotInvertible,
    SuperMatrix,
    berezinian,
    generator,
    grassmann_mul,
    is_invertible,
    random_supermatrix,
)

N = 4
G = GrassmannElement


def elements(n=N, parity=None):
    masks = [m for m in range(1 << n) if parity is None or bin(m).count("1") % 2 == parity]
    return st.dictionaries(st.sampled_from(masks), st.integers(-4, 4), max_size=5).map(lambda d: G(n, d))


class TestGrassmann:
    def test_anticommuting_generators(self):
        t1, t2 = generator(2, 1), generator(2, 2)
        assert t1 * t2 == -(t2 * t1)
        assert str(t1 * t2) == "t1*t2" and str(t2 * t1) == "-t1*t2"
        assert (t1 * t1).is_zero()

    def test_inverse_of_one_plus_generator(self):
        t1 = generator(1, 1)
        assert (1 + t1) * (1 - t1) == G.const(1)
        assert (1 + t1).inverse() == 1 - t1

    def test_inverse_requires_body(self):
        with pytest.raises(NotInvertible):
            generator(2, 1).inverse()

    def test_parse(self):
        x = G.parse("1 - 2/3*t1*t2 + t4", 4)
        assert x.body == 1 and x.terms == {0b0011: Fraction(-2, 3), 0b1000: 1, 0: 1}
        assert G.parse("t2*t1", 2) == -G.parse("t1*t2", 2)

    def test_parse_rejects(self):
        with pytest.raises(GeneratorMismatch):
            G.parse("t3", 2)
        with pytest.raises(ValueError):
            G.parse("x1", 2)

    def test_mixed_generator_counts(self):
        with pytest.raises(GeneratorMismatch):
            generator(1, 1) + generator(2, 1)

    @settings(max_examples=150, deadline=None)
    @given(elements(), elements(), elements())
    def test_ring_axioms(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert grassmann_mul(a, b) == a * b

    @settings(max_examples=150, deadline=None)
    @given(elements(parity=1), elements(parity=1), elements(parity=0))
    def test_supercommutativity(self, x, y, e):
        assert x * y == -(y * x)
        assert (x * x).is_zero()
        assert e * x == x * e

    @settings(max_examples=100, deadline=None)
    @given(elements())
    def test_str_parse_round_trip(self, a):
        assert G.parse(str(a), N) == a

    @settings(max_examples=100, deadline=None)
    @given(elements().filter(lambda a: a.body != 0))
    def test_inverse(self, a):
        assert a * a.inverse() == G.const(N)


def block_diag(a, d, n_gen):
    m, n = len(a), len(d)
    rows = [[0] * (m + n) for _ in range(m + n)]
    for i in range(m):
        for j in range(m):
            rows[i][j] = a[i][j]
    for i in range(n):
        for j in range(n):
            rows[m + i][m + j] = d[i][j]
    return SuperMatrix.build(m, n, rows, n_gen)


class TestBerezinian:
    def test_one_one_example(self):
        g = SuperMatrix.build(1, 1, [[1, "t1"], ["t2", 1]], 2)
        assert str(berezinian(g)) == "1 - t1*t2"

    def test_diagonal(self):
        assert berezinian(SuperMatrix.build(1, 1, [[2, 0], [0, 3]], 2)) == G.const(2, Fraction(2, 3))

    def test_identity(self):
        assert berezinian(SuperMatrix.identity(2, 1, 3)) == G.const(3)

    def test_block_diagonal_is_det_ratio(self):
        a, d = [[2, 1], [1, 1]], [[3, 1], [1, 2]]
        want = Fraction(la.det(a)) / la.det(d)
        assert berezinian(block_diag(a, d, 2)) == G.const(2, want)

    def test_unipotent_is_one(self):
        g = SuperMatrix.build(1, 2, [[1, "t1", "t2"], [0, 1, 0], [0, 0, 1]], 2)
        assert berezinian(g) == G.const(2)

    def test_purely_even(self):
        g = SuperMatrix.build(2, 0, [[1, "t1*t2"], [3, 4]], 2)
        assert berezinian(g) == G.parse("4 - 3*t1*t2", 2)

    def test_not_invertible(self):
        g = SuperMatrix.build(1, 1, [[0, "t1"], ["t2", 1]], 2)
        assert not is_invertible(g)
        with pytest.raises(NotInvertible):
            berezinian(g)

    def test_parity_checked(self):
        with pytest.raises(ValueError):
            SuperMatrix.build(1, 1, [["t1", 0], [0, 1]], 2)

    def test_body_is_det_ratio_of_bodies(self):
        rng = random.Random(7)
        for _ in range(20):
            g = random_supermatrix(2, 1, 3, rng)
            b1, _, _, b4 = g.blocks()
            want = la.det([[e.body for e in r] for r in b1]) / la.det([[e.body for e in r] for r in b4])
            assert berezinian(g).body == want

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([(1, 1), (2, 1), (1, 2)]), st.integers(0, 2**32 - 1))
    def test_multiplicative(self, size, seed):
        rng = random.Random(seed)
        a = random_supermatrix(*size, 3, rng)
        b = random_supermatrix(*size, 3, rng)
        assert berezinian(a @ b) == berezinian(a) * berezinian(b)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_ber_is_even(self, seed):
        assert berezinian(random_supermatrix(1, 1, 4, random.Random(seed))).is_even()
