from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdatum import _linalg as la
from superdatum.lattice import (
    DualityPairing,
    Lattice,
    RationalForm,
    TorsionError,
    free_lattice,
    gram_matrix,
    invariant_factors,
    lattice_basis,
    lattice_direct_sum,
    quotient_lattice,
    smith_normal_form,
    span_rank,
    spans_lattice,
    sublattice,
)


def determinantal_divisors(m):
    """d_k = gcd of all k x k minors; independent of any reduction algorithm."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, int(la.det([[m[r][c] for c in cs] for r in rs])))
        out.append(g)
    return out


def factors_from_divisors(ds):
    out, prev = [], 1
    for d in ds:
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return tuple(out)


int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


class TestSmithNormalForm:
    def test_diag_2_3(self):
        _, d, _ = smith_normal_form([[2, 0], [0, 3]])
        assert d == ((1, 0), (0, 6))

    def test_identity(self):
        _, d, _ = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert d == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_zero_1x1(self):
        _, d, _ = smith_normal_form([[0]])
        assert d == ((0,),)

    def test_empty(self):
        u, d, v = smith_normal_form([])
        assert u == () and d == () and v == ()

    @settings(max_examples=150, deadline=None)
    @given(int_matrices)
    def test_round_trip_and_unimodular(self, m):
        u, d, v = smith_normal_form(m)
        assert la.matmul(la.matmul(u, m), v) == la.mat(d)
        assert abs(la.det(u)) == 1 and abs(la.det(v)) == 1
        diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
        assert all(x >= 0 for x in diag)
        off = [d[i][j] for i in range(len(d)) for j in range(len(d[0])) if i != j]
        assert not any(off)
        nz = [x for x in diag if x]
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))

    @settings(max_examples=150, deadline=None)
    @given(int_matrices)
    def test_matches_minor_gcd_oracle(self, m):
        assert invariant_factors(m) == factors_from_divisors(determinantal_divisors(m))


class TestQuotientLattice:
    def test_rank_one_quotient(self):
        lat = quotient_lattice(2, [(1, -1)])
        assert lat.rank == 1
        assert lat.equal((1, 0), (0, 1))
        assert not lat.equal((1, 0), (0, 0))

    def test_torsion(self):
        with pytest.raises(TorsionError):
            quotient_lattice(2, [(2, 0)])

    def test_empty_relations(self):
        lat = quotient_lattice(2, [])
        assert lat.rank == 2 and lat.basis() == [(1, 0), (0, 1)]

    def test_sublattice_of_quotient(self):
        # Z^4 / <(1,1,-1,-1)> cut by the coordinate sum: rank 2
        lat = sublattice(quotient_lattice(4, [(1, 1, -1, -1)]), [(1, 1, 1, 1)])
        assert lat.rank == 2
        for b in lat.basis():
            assert sum(b) == 0
        with pytest.raises(ValueError):
            lat.coordinates((1, 0, 0, 0))

    def test_direct_sum(self):
        s = lattice_direct_sum([quotient_lattice(2, [(1, -1)]), free_lattice(1)])
        assert s.ambient_rank == 3 and s.rank == 2

    @settings(max_examples=80, deadline=None)
    @given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)), max_size=3))
    def test_never_returns_torsion(self, rels):
        try:
            lat = quotient_lattice(3, rels)
        except TorsionError:
            assert any(f > 1 for f in invariant_factors(rels))
            return
        assert all(f == 1 for f in invariant_factors(rels))
        assert lat.rank == 3 - span_rank(rels)

    @settings(max_examples=60, deadline=None)
    @given(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)))
    def test_coordinates_round_trip(self, v):
        lat = quotient_lattice(3, [(1, 1, -1)])
        c = lat.coordinates(v)
        assert lat.coordinates(lat.representative(c)) == c
        assert lat.equal(v, lat.representative(c))


class TestSpan:
    def test_standard_basis(self):
        assert span_rank([(1, 0), (0, 1)]) == 2

    def test_sl21_roots(self):
        roots = [(1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1)]
        assert span_rank(roots) == 2

    def test_empty(self):
        assert span_rank([]) == 0

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), max_size=5), st.randoms())
    def test_invariant_under_permutation_and_negation(self, vs, rnd):
        shuffled = list(vs)
        rnd.shuffle(shuffled)
        negated = [tuple(-x for x in v) if rnd.random() < 0.5 else v for v in shuffled]
        assert span_rank(vs) == span_rank(shuffled) == span_rank(negated)

    def test_spans_lattice(self):
        ok, _ = spans_lattice([(1, 0), (0, 1)], 2)
        assert ok
        ok, factors = spans_lattice([(1, 1), (1, -1)], 2)
        assert not ok and factors == (1, 2)

    def test_lattice_basis_of_index_two(self):
        basis = lattice_basis([(1, 1), (1, -1)])
        assert len(basis) == 2
        assert abs(la.det(basis)) == 2

    def test_lattice_basis_full(self):
        assert lattice_basis([(1, 0), (1, 1)]) == [la.vec((1, 0)), la.vec((0, 1))]


class TestForms:
    def test_gram_gl11_isotropic(self):
        f = RationalForm([[1, 0], [0, -1]])
        assert gram_matrix(f, [(1, -1)]) == ((0,),)

    def test_gram_empty(self):
        assert gram_matrix(RationalForm([[1]]), []) == ()

    def test_gram_identity(self):
        assert gram_matrix(RationalForm([[1, 0], [0, 1]]), [(1, 0), (0, 1)]) == la.identity(2)

    def test_gram_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gram_matrix(RationalForm([[1, 0], [0, 1]]), [(1, 0, 0)])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            RationalForm([[1, 2], [0, 1]])

    def test_radical(self):
        f = RationalForm([[1, 1], [1, 1]])
        assert not f.is_nondegenerate()
        (r,) = f.radical()
        assert f.apply(r) == (0, 0)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=4))
    def test_gram_symmetric(self, vs):
        f = RationalForm([[2, Fraction(1, 2)], [Fraction(1, 2), -1]])
        g = gram_matrix(f, vs)
        assert all(g[i][j] == g[j][i] for i in range(len(vs)) for j in range(len(vs)))

    def test_standard_pairing(self):
        p = DualityPairing.standard(3)
        assert p.is_standard() and p((1, 2, 3), (1, 0, 1)) == 4


def test_lattice_rejects_bad_lengths():
    with pytest.raises(ValueError):
        Lattice(2, ((1, 0, 0),))
