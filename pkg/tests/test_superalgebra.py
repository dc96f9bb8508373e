from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superdatum import _linalg as la
from superdatum.catalog import ParameterOutOfRange, build_grs
from superdatum.superalgebra import (
    BilinearForm,
    DegenerateOnCartan,
    IsotropicOrOdd,
    SuperAlgebra,
    cartan_element,
    center,
    check_jacobi,
    double_odd,
    invariant_forms,
    quotient_center,
    realize,
    realize_d21a,
    realize_sl,
    root_decomposition,
    sl2_triple,
    supertrace_form,
)

F = Fraction
MATRIX_TAGS = ["gl(1|1)", "gl(2|1)", "gl(1|2)", "sl(2|1)", "osp(1|2)", "osp(3|2)", "osp(2|2)", "osp(4|2)"]
ROOT_TAGS = MATRIX_TAGS + ["D21a(1)", "D21a(1/2)", "D21a(-2/3)", "sl(3|2)"]


def abelian11():
    return SuperAlgebra(("h", "x"), (0, 1), {}, (0,))


def supercommutator(a, b, pa, pb):
    ab, ba = la.matmul(a, b), la.matmul(b, a)
    sign = -1 if pa and pb else 1
    return tuple(tuple(x - sign * y for x, y in zip(r, s)) for r, s in zip(ab, ba))


def combine(sa, v):
    size = len(sa.matrices[0])
    out = [[F(0)] * size for _ in range(size)]
    for c, m in zip(v, sa.matrices):
        if c:
            for i in range(size):
                for j in range(size):
                    out[i][j] += c * m[i][j]
    return tuple(map(tuple, out))


class TestConstruction:
    def test_wrong_parity_rejected(self):
        with pytest.raises(ValueError):
            SuperAlgebra(("h", "x"), (0, 1), {(0, 1): ((0, 1),), (1, 0): ((0, -1),)})

    def test_antisymmetry_enforced(self):
        with pytest.raises(ValueError):
            SuperAlgebra(("a", "b"), (0, 0), {(0, 1): ((0, 1),)})

    def test_odd_odd_symmetric(self):
        sa = SuperAlgebra(("h", "x"), (0, 1), {(1, 1): ((0, 2),)}, (0,))
        assert sa.bracket((0, 1), (0, 1)) == (2, 0)

    def test_sdim(self):
        assert realize("gl(2|1)").sdim == (5, 4)
        assert realize("osp(3|2)").sdim == (6, 6)
        assert realize("D21a(2)").sdim == (9, 8)

    def test_describe(self):
        sa = realize("gl(2|1)")
        assert sa.describe(sa.element({"E11": 1, "E22": -1})) == "E11 - E22"
        assert sa.describe(sa.element({"E12": F(1, 2)})) == "1/2*E12"
        assert sa.describe(sa.element({})) == "0"

    def test_unsupported_families(self):
        for tag in ("F4", "G3"):
            with pytest.raises(ParameterOutOfRange):
                realize(tag)


class TestMatrixRealizations:
    @pytest.mark.parametrize("tag", MATRIX_TAGS)
    def test_structure_constants_match_supercommutator(self, tag):
        sa = realize(tag)
        for i in range(sa.dim):
            for j in range(sa.dim):
                want = supercommutator(sa.matrices[i], sa.matrices[j], sa.parity[i], sa.parity[j])
                assert combine(sa, sa.bracket(sa.basis_vector(i), sa.basis_vector(j))) == want

    @pytest.mark.parametrize("tag", MATRIX_TAGS)
    def test_supertrace_is_invariant(self, tag):
        sa = realize(tag)
        assert supertrace_form(sa).violations(sa) == []

    def test_supertrace_needs_matrices(self):
        with pytest.raises(ValueError):
            supertrace_form(realize("D21a(2)"))


class TestJacobi:
    @pytest.mark.parametrize("tag", ROOT_TAGS)
    def test_realizations_pass(self, tag):
        assert check_jacobi(realize(tag)) is None

    def test_bad_sigma_fails(self):
        assert check_jacobi(realize_d21a(sigma=(1, 1, 1))) is not None

    def test_standard_sigma_passes_for_several_alpha(self):
        for a in (F(1), F(2), F(-1, 3)):
            assert check_jacobi(realize_d21a(sigma=(-(1 + a), 1, a))) is None

    def test_perturbed_bracket_fails(self):
        sa = realize("gl(1|1)")
        i, j, k = sa.index("E12"), sa.index("E21"), sa.index("E11")
        bad = sa.with_bracket(i, j, [(k, 1)])
        v = check_jacobi(bad)
        assert v is not None and "Jacobi fails" in str(v)

    def test_double_odd_gl11_passes(self):
        assert check_jacobi(double_odd(realize("gl(1|1)"))) is None

    def test_double_odd_sl21_fails(self):
        v = check_jacobi(double_odd(realize("sl(2|1)")))
        assert v is not None and any(x.endswith("'") for x in v.triple)


class TestRoots:
    @pytest.mark.parametrize("tag", ROOT_TAGS)
    def test_roots_match_catalog(self, tag):
        sa, g = realize(tag), build_grs(tag)
        dec = root_decomposition(sa)
        assert dec.even_roots() == {sa.weight_of(r) for r in g.even}
        assert dec.odd_roots() == {sa.weight_of(r) for r in g.odd}
        assert dec.monodromy

    def test_sl22_not_monodromy_free(self):
        dec = root_decomposition(realize_sl(2, 2))
        assert not dec.monodromy

    def test_zero_weight_is_cartan(self):
        sa = realize("osp(3|2)")
        assert root_decomposition(sa).spaces[(0, 0)] == (len(sa.cartan), 0)


class TestCenter:
    def test_gl21_center_is_identity(self):
        sa = realize("gl(2|1)")
        (z,) = center(sa)
        assert z == la.scale(z[sa.index("E11")], sa.element({"E11": 1, "E22": 1, "E33": 1}))

    def test_sl11_quotient_is_abelian(self):
        q = quotient_center(realize("sl(1|1)"))
        assert q.sdim == (0, 2) and not q.table

    def test_psl22(self):
        q = quotient_center(realize_sl(2, 2))
        assert q.sdim == (6, 8) and check_jacobi(q) is None

    def test_simple_has_trivial_center(self):
        assert center(realize("osp(3|2)")) == []


class TestInvariantForms:
    @pytest.mark.parametrize("tag", ROOT_TAGS)
    def test_witness_is_invariant_and_nondegenerate(self, tag):
        sa = realize(tag)
        res = invariant_forms(sa)
        assert res.witness is not None and res.certificate is None
        assert res.witness.is_nondegenerate() and res.witness.violations(sa) == []
        assert all(b.violations(sa) == [] for b in res.basis)

    def test_gl_has_two_forms(self):
        assert invariant_forms(realize("gl(2|1)")).dimension == 2

    @pytest.mark.parametrize("make", [lambda: realize("sl(1|1)"), abelian11], ids=["sl11", "abelian"])
    def test_degenerate_certificate(self, make):
        res = invariant_forms(make())
        assert res.witness is None and res.certificate

    def test_double_odd_gl11_has_witness(self):
        res = invariant_forms(double_odd(realize("gl(1|1)")))
        assert res.witness is not None and res.witness.det() == -1

    def test_violations_report_failures(self):
        sa = realize("gl(1|1)")
        assert BilinearForm(la.identity(sa.dim)).violations(sa)


class TestTriples:
    def test_gl21_example(self):
        sa = realize("gl(2|1)")
        e, h, f = sl2_triple(sa, (1, -1, 0))
        assert e == sa.element({"E12": 1})
        assert h == sa.element({"E11": 1, "E22": -1})
        assert f == sa.element({"E21": 1})

    @pytest.mark.parametrize("tag", ["osp(3|2)", "osp(4|2)", "D21a(1/2)", "sl(3|2)"])
    def test_relations_for_every_even_root(self, tag):
        sa, g = realize(tag), build_grs(tag)
        for alpha in g.even:
            e, h, f = sl2_triple(sa, alpha)
            assert sa.bracket(h, e) == la.scale(2, e)
            assert sa.bracket(h, f) == la.scale(-2, f)
            assert sa.bracket(e, f) == h

    def test_odd_root_rejected(self):
        with pytest.raises(IsotropicOrOdd):
            sl2_triple(realize("gl(2|1)"), (1, 0, -1))

    def test_non_root_rejected(self):
        with pytest.raises(ValueError):
            sl2_triple(realize("gl(2|1)"), (2, 0, 0))

    def test_cartan_element_gl11(self):
        sa = realize("gl(1|1)")
        h = cartan_element(sa, supertrace_form(sa), (1, -1))
        assert h == sa.element({"E11": 1, "E22": 1})

    def test_cartan_element_solves_defining_equation(self):
        sa = realize("osp(3|2)")
        form = invariant_forms(sa).witness
        theta = (1, 1)
        h = cartan_element(sa, form, theta)
        w = sa.weight_of(theta)
        for k, c in enumerate(sa.cartan):
            assert form(h, sa.basis_vector(c)) == w[k]

    def test_degenerate_on_cartan(self):
        sa = realize("sl(1|1)")
        with pytest.raises(DegenerateOnCartan):
            cartan_element(sa, supertrace_form(sa), (1, -1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(MATRIX_TAGS[:5]), st.data())
def test_super_antisymmetry_and_invariance_on_homogeneous_elements(tag, data):
    sa = realize(tag)
    form = invariant_forms(sa).witness
    coeff = st.integers(-3, 3)

    def draw(parity):
        return tuple(F(data.draw(coeff)) if p == parity else F(0) for p in sa.parity)

    px, py = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    x, y, z = draw(px), draw(py), draw(data.draw(st.integers(0, 1)))
    sign = -1 if px and py else 1
    assert sa.bracket(x, y) == la.scale(-sign, sa.bracket(y, x))
    assert form(sa.bracket(x, y), z) == form(x, sa.bracket(y, z))
