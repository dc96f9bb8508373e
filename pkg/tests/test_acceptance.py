"""Acceptance suite: one test and one summary line per criterion.

Every comparison is exact over Fraction / integer arithmetic, so the pinned
tolerance is zero throughout.  Run under pytest for the summary block, or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Iterator

import pytest

from superdatum import _linalg as la
from superdatum.analysis import decompose, equivalent, find_isometry, recognize
from superdatum.catalog import FamilyTag, build_datum, build_grs, datum_corpus, direct_sum, grs_corpus
from superdatum.rootdatum import lemma_violations, odd_reflection, verify_bqr
from superdatum.superalgebra import (
    cartan_element,
    check_jacobi,
    double_odd,
    invariant_forms,
    realize,
    root_decomposition,
    sl2_triple,
)
from superdatum.supermatrix import GrassmannElement, SuperMatrix, berezinian, random_supermatrix

TOLERANCE = 0  # exact arithmetic; any nonzero defect is a failure
BER_SEED = 20240601
BER_PAIRS_PER_SIZE = 120
BER_GENERATORS = 4
D21A_ALPHAS = ("1", "2", "1/2", "-3", "-2/3")
ALGEBRAS = (
    [f"gl({m}|{n})" for m in range(1, 4) for n in range(1, 4)]
    + [f"sl({m}|{n})" for m in range(1, 4) for n in range(1, 4) if m != n]
    + ["osp(1|2)", "osp(2|2)", "osp(3|2)"]
    + [f"D21a({a})" for a in D21A_ALPHAS]
)

Case = tuple[str, bool, str]


@dataclass
class Outcome:
    number: int
    title: str
    cases: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"criterion {self.number}: {verdict}  {self.title}  [{self.cases - len(self.failures)}/{self.cases} cases, tol={TOLERANCE}, {self.seconds:.1f}s]"
        if self.failures:
            shown = "; ".join(f"{cid}: {why}" for cid, why in self.failures[:8])
            more = f" (+{len(self.failures) - 8} more)" if len(self.failures) > 8 else ""
            text += f"\n    failing: {shown}{more}"
        return text


SUMMARY: dict[int, Outcome] = {}
_algebra_cache: dict[str, object] = {}


def algebra(tag):
    if tag not in _algebra_cache:
        _algebra_cache[tag] = realize(tag)
    return _algebra_cache[tag]


# --------------------------------------------------------------------------
# criteria


def axioms() -> Iterator[Case]:
    for tag in grs_corpus():
        rep = verify_bqr(build_grs(tag), "rational")
        bad = [k for k in ("BQR(1)", "BQR(3)", "BQR(4)") if rep[k].failed]
        yield f"grs {tag}", not bad, ", ".join(f"{k} witness {rep[k].witness}" for k in bad)
    for group, params in datum_corpus():
        rep = verify_bqr(build_datum(group, *params), "rational")
        bad = [k for k in ("BQR(1)", "BQR(3)", "BQR(4)") if rep[k].failed]
        name = " ".join([group, *map(str, params)])
        yield f"datum {name}", not bad, ", ".join(f"{k} witness {rep[k].witness}" for k in bad)


def lemmas() -> Iterator[Case]:
    for tag in grs_corpus():
        found = lemma_violations(build_grs(tag))
        bad = {k: v for k, v in found.items() if v}
        yield str(tag), not bad, "; ".join(f"{k}: {v[0]}" for k, v in bad.items())


def round_trip() -> Iterator[Case]:
    for tag in grs_corpus():
        res = recognize(build_grs(tag))
        ok = res.family is not None and res.family.root_class() == tag.root_class()
        yield f"recognize {tag}", ok, f"got {res}"
    pool = ["sl(2|1)", "osp(1|2)", "osp(3|2)"]
    for parts in combinations_with_replacement(pool, 3):
        pieces = decompose(direct_sum([build_grs(p) for p in parts]))
        left = [decompose(build_grs(p))[0] for p in parts]
        ok = len(pieces) == 3
        for piece in pieces if ok else ():
            hit = next((i for i, g in enumerate(left) if find_isometry(piece, g, allow_scale=False)), None)
            if hit is None:
                ok = False
                break
            left.pop(hit)
        yield "decompose " + " + ".join(parts), ok and not left, f"{len(pieces)} components"


def equivalence() -> Iterator[Case]:
    for group, params in datum_corpus():
        d = build_datum(group, *params)
        e = equivalent(d, d)
        ok = e is not None and la.mat(e.matrix) == la.identity(len(e.matrix))
        yield "reflexive " + " ".join([group, *map(str, params)]), ok, "no identity witness"
    d1, d2 = build_datum("D21a", 2), build_datum("D21a", "1/2")
    e = equivalent(d1, d2)
    ok = (
        e is not None
        and la.matmul(e.matrix, e.inverse) == la.identity(len(e.matrix))
        and sorted(e.apply(r) for r in d1.even) == sorted(d2.even)
        and sorted(e.apply(r) for r in d1.odd) == sorted(d2.odd)
    )
    yield "D21a(2) ~ D21a(1/2)", ok, "witness missing or not a bijection on roots"
    e = equivalent(build_datum("GL", 1, 1), build_datum("GL", 2, 1))
    yield "GL(1,1) !~ GL(2,1)", e is None, "unexpected witness"


def superalgebras() -> Iterator[Case]:
    for tag in ALGEBRAS:
        sa, g = algebra(tag), build_grs(tag)
        bad = check_jacobi(sa)
        yield f"jacobi {tag}", bad is None, str(bad)
        dec = root_decomposition(sa)
        ok = (
            dec.even_roots() == {sa.weight_of(r) for r in g.even}
            and dec.odd_roots() == {sa.weight_of(r) for r in g.odd}
            and dec.monodromy
        )
        yield f"roots {tag}", ok, "weight sets differ or monodromy false"
        form = invariant_forms(sa).witness
        if form is None:
            yield f"cartan {tag}", False, "no non-degenerate form"
            continue
        worst = ""
        for theta in g.roots:
            h = cartan_element(sa, form, theta)
            w = sa.weight_of(theta)
            for x in dec.vectors[w]:
                for y in dec.vectors[la.neg(w)]:
                    if sa.bracket(x, y) != la.scale(form(x, y), h):
                        worst = f"[g_θ, g_-θ] off H_θ at θ = {la.fmt_vec(theta)}"
        yield f"cartan {tag}", not worst, worst


def form_dichotomy() -> Iterator[Case]:
    for tag in ALGEBRAS:
        res = invariant_forms(algebra(tag))
        ok = res.witness is not None and res.witness.is_nondegenerate() and not res.witness.violations(algebra(tag))
        yield f"witness {tag}", ok, res.certificate or "witness fails"
    for tag in ("sl(2|1)", "gl(1|1)"):
        res = invariant_forms(double_odd(realize(tag)))
        ok = res.witness is None and bool(res.certificate)
        why = f"non-degenerate invariant form found (det {la.fmt(res.witness.det())})" if res.witness else ""
        yield f"certificate double_odd({tag})", ok, why


def bqr2_discrepancy() -> Iterator[Case]:
    for m in range(1, 5):
        for n in range(1, 5):
            rep = verify_bqr(build_datum("GL", m, n), "strict")
            v = rep["BQR(2)"]
            yield f"GL({m},{n}) deficit 1", v.failed and v.witness == "rank deficit 1", f"{v.status} {v.witness}"
    for m in range(1, 5):
        for n in range(1, 5):
            if (m, n) == (2, 2):
                continue
            v = verify_bqr(build_datum("SL", m, n), "strict")["BQR(2)"]
            yield f"SL({m},{n}) strict", v.passed, f"{v.witness} {v.detail}".strip()


def berezinian_cases() -> Iterator[Case]:
    rng = random.Random(BER_SEED)
    for size in ((1, 1), (2, 1)):
        for k in range(BER_PAIRS_PER_SIZE):
            g = random_supermatrix(*size, BER_GENERATORS, rng)
            h = random_supermatrix(*size, BER_GENERATORS, rng)
            lhs, rhs = berezinian(g @ h), berezinian(g) * berezinian(h)
            yield f"{size[0]}|{size[1]} pair {k}", lhs == rhs, f"defect {lhs - rhs}"
        ident = berezinian(SuperMatrix.identity(*size, BER_GENERATORS))
        yield f"{size[0]}|{size[1]} identity", ident == GrassmannElement.const(BER_GENERATORS), str(ident)


def triples() -> Iterator[Case]:
    for tag in ALGEBRAS:
        sa, g = algebra(tag), build_grs(tag)
        for alpha in g.even:
            e, h, f = sl2_triple(sa, alpha)
            w = sa.weight_of(alpha)
            value = la.dot(w, tuple(h[i] for i in sa.cartan))
            ok = value == 2 and sa.bracket(h, e) == la.scale(2, e) and sa.bracket(h, f) == la.scale(-2, f)
            ok = ok and sa.bracket(e, f) == h
            yield f"{tag} α = {la.fmt_vec(alpha)}", ok, f"α(h) = {la.fmt(value)}"


CRITERIA: list[tuple[int, str, Callable[[], Iterator[Case]]]] = [
    (1, "BQR(1),(3),(4) on the rank <= 6 corpus (rational mode)", axioms),
    (2, "structural lemmas on every root and pair", lemmas),
    (3, "recognize / decompose round trip", round_trip),
    (4, "equivalence of root data", equivalence),
    (5, "Jacobi, root spaces and Cartan elements", superalgebras),
    (6, "invariant-form dichotomy", form_dichotomy),
    (7, "BQR(2): GL deficit 1, SL strict", bqr2_discrepancy),
    (8, "Berezinian multiplicativity", berezinian_cases),
    (9, "sl2-triples for every even root", triples),
]


def evaluate(number: int, title: str, cases: Callable[[], Iterator[Case]]) -> Outcome:
    out = Outcome(number, title)
    start = time.perf_counter()
    for cid, ok, why in cases():
        out.cases += 1
        if not ok:
            out.failures.append((cid, why))
    out.seconds = time.perf_counter() - start
    SUMMARY[number] = out
    return out


@pytest.mark.parametrize("number,title,cases", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, cases):
    out = evaluate(number, title, cases)
    print(out.line())
    assert out.cases > 0
    assert out.passed, out.line()


def test_berezinian_sample_is_large_enough():
    assert 2 * BER_PAIRS_PER_SIZE >= 100 and BER_GENERATORS == 4


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
