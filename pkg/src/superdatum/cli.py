"""``superdatum`` command-line front end.

Exit codes: 0 success or pass, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import _linalg as la
from .analysis import NotIrreducible, decompose, equivalence_search, recognize
from .catalog import (
    GROUP_FORMS,
    MixedKinds,
    ParameterOutOfRange,
    build_datum,
    build_grs,
    datum_corpus,
    grs_corpus,
)
from .document import (
    DocumentSyntaxError,
    Report,
    SchemaError,
    VersionError,
    parse_document,
    serialize,
)
from .rootdatum import GRS, SPAN_MODES, RootDatum, lemma_violations, verify_bqr
from .superalgebra import (
    seed,
    SuperAlgebra,
    check_jacobi,
    double_odd,
    invariant_forms,
    quotient_center,
    realize,
    root_decomposition,
)
from .supermatrix import SuperMatrix, berezinian, random_supermatrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# --------------------------------------------------------------------------
# inputs


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _sources(args) -> list[tuple[str, object]]:
    """Objects named on the command line, in order: --in files, then --family, then --tag."""
    out: list[tuple[str, object]] = []
    for path in args.inputs or ():
        doc = parse_document(_read(path))
        out.append((doc.name or path, doc.payload))
    for entry in args.family or ():
        group, *params = entry
        if group not in GROUP_FORMS:
            raise UsageError(f"unknown group form {group!r}; choose from {', '.join(GROUP_FORMS)}")
        d = build_datum(group, *params)
        out.append((d.name, d))
    for tag in args.tag or ():
        out.append((tag, build_grs(tag)))
    return out


def _one(args, kinds: tuple[type, ...]) -> tuple[str, object]:
    src = _sources(args)
    if len(src) != 1:
        raise UsageError(f"expected exactly one input, got {len(src)}")
    name, obj = src[0]
    if not isinstance(obj, kinds):
        raise UsageError(f"{name}: expected {' or '.join(k.__name__ for k in kinds)}, got {type(obj).__name__}")
    return name, obj


def _as_grs(obj) -> GRS:
    return obj.grs() if isinstance(obj, RootDatum) else obj


# --------------------------------------------------------------------------
# commands


def cmd_catalog(args) -> Report | str:
    src = _sources(args)
    if src:
        return "".join(serialize(obj, name) for name, obj in src)
    entries = []
    for tag in grs_corpus():
        g = build_grs(tag)
        entries.append(("grs", f"{tag} dim {g.ambient_dim} even {len(g.even)} odd {len(g.odd)}"))
    for group, params in datum_corpus():
        entries.append(("datum", " ".join([group, *map(str, params)])))
    return Report("catalog", "pass", tuple(entries))


def cmd_verify(args) -> Report:
    name, obj = _one(args, (GRS, RootDatum))
    rep = verify_bqr(obj, args.mode)
    entries = [("input", name), ("span_mode", rep.span_mode)]
    for label, v in rep.verdicts.items():
        text = v.status
        if v.witness:
            text += f" witness {v.witness}"
        if v.detail:
            text += f" ({v.detail})"
        entries.append((label, text))
    ok = rep.passed
    if isinstance(obj, GRS):
        for lemma, bad in lemma_violations(obj).items():
            entries.append((f"lemma_{lemma}", "pass" if not bad else f"fail {len(bad)} witness {bad[0]}"))
            ok = ok and not bad
    entries += [("note", n) for n in rep.notes]
    return Report("verify", "pass" if ok else "fail", tuple(entries))


def cmd_decompose(args) -> Report:
    name, obj = _one(args, (GRS, RootDatum))
    parts = decompose(_as_grs(obj))
    entries = [("input", name), ("components", str(len(parts)))]
    for k, p in enumerate(parts, 1):
        try:
            fam = str(recognize(p))
        except NotIrreducible:
            fam = "Unknown"
        roots = " ".join(la.fmt_vec(r) for r in p.even) or "-"
        odd = " ".join(la.fmt_vec(r) for r in p.odd) or "-"
        entries.append(("component", f"{k} {fam} even {roots} odd {odd}"))
    return Report("decompose", "pass", tuple(entries))


def cmd_recognize(args) -> Report:
    name, obj = _one(args, (GRS, RootDatum))
    try:
        res = recognize(_as_grs(obj))
    except NotIrreducible as exc:
        return Report("recognize", "fail", (("input", name), ("family", "Unknown"), ("reason", str(exc))))
    entries = [("input", name), ("family", str(res))]
    if res.family is not None:
        entries.append(("family_name", res.family.family))
        entries.append(("parameters", " ".join(la.fmt(Fraction(p)) for p in res.parameters) or "-"))
    entries += [(k, str(v)) for k, v in res.invariants.items()]
    entries += [("note", n) for n in res.notes]
    return Report("recognize", "pass" if res.known else "fail", tuple(entries))


def cmd_equiv(args) -> Report:
    src = _sources(args)
    if len(src) != 2:
        raise UsageError(f"equiv needs exactly two root data, got {len(src)}")
    (n1, d1), (n2, d2) = src
    if not (isinstance(d1, RootDatum) and isinstance(d2, RootDatum)):
        raise UsageError("equiv compares root data (use --family or rootdatum documents)")
    eq, reason = equivalence_search(d1, d2)
    entries = [("source", n1), ("target", n2)]
    if eq is None:
        entries.append(("equivalence", "None"))
        entries.append(("reason", reason))
        return Report("equiv", "fail", tuple(entries))
    entries.append(("equivalence", "found"))
    entries += [("matrix_row", ", ".join(str(x) for x in row)) for row in eq.matrix]
    return Report("equiv", "pass", tuple(entries))


def _algebra(args) -> tuple[str, SuperAlgebra]:
    if args.inputs:
        doc = parse_document(_read(args.inputs[0]))
        if not isinstance(doc.payload, SuperAlgebra):
            raise UsageError(f"expected a superalgebra document, got {doc.kind}")
        sa = doc.payload
    elif args.tag and len(args.tag) == 1:
        sa = realize(args.tag[0])
    else:
        raise UsageError("give one --tag or one --in superalgebra document")
    if getattr(args, "quotient_center", False):
        sa = quotient_center(sa)
    if getattr(args, "double_odd", False):
        sa = double_odd(sa)
    return sa.name, sa


def cmd_realize(args) -> Report | str:
    name, sa = _algebra(args)
    if args.emit:
        return serialize(sa)
    even, odd = sa.sdim
    entries = [("algebra", name), ("sdim", f"{even}|{odd}")]
    bad = check_jacobi(sa)
    entries.append(("jacobi", "pass" if bad is None else f"fail witness ({', '.join(bad.triple)})"))
    ok = bad is None
    try:
        dec = root_decomposition(sa)
        entries.append(("roots", str(len(dec.roots))))
        entries.append(("monodromy", str(dec.monodromy).lower()))
        if args.tag and sa.frame is not None and not (args.double_odd or args.quotient_center):
            g = build_grs(args.tag[0])
            match = dec.even_roots() == {sa.weight_of(r) for r in g.even} and dec.odd_roots() == {
                sa.weight_of(r) for r in g.odd
            }
            entries.append(("matches_catalog", str(match).lower()))
            ok = ok and match
    except ValueError as exc:
        entries.append(("roots", f"unavailable ({exc})"))
    return Report("realize", "pass" if ok else "fail", tuple(entries))


def cmd_forms(args) -> Report:
    name, sa = _algebra(args)
    res = invariant_forms(sa)
    entries = [("algebra", name), ("seed", str(seed())), ("dimension", str(res.dimension))]
    if res.witness is not None:
        entries.append(("nondegenerate", "yes"))
        entries.append(("witness_det", la.fmt(res.witness.det())))
        return Report("forms", "pass", tuple(entries))
    entries.append(("nondegenerate", "no"))
    entries.append(("certificate", res.certificate or ""))
    return Report("forms", "fail", tuple(entries))


def cmd_ber(args) -> Report:
    m, n = args.size
    if args.check:
        rng = random.Random(seed())
        failures = 0
        for _ in range(args.check):
            g = random_supermatrix(m, n, args.generators, rng)
            h = random_supermatrix(m, n, args.generators, rng)
            if berezinian(g @ h) != berezinian(g) * berezinian(h):
                failures += 1
        entries = (("size", f"{m}|{n}"), ("generators", str(args.generators)), ("samples", str(args.check)), ("seed", str(seed())),
                   ("failures", str(failures)))
        return Report("ber", "pass" if not failures else "fail", entries)
    size = m + n
    if not args.entries or len(args.entries) != size * size:
        raise UsageError(f"--entries needs {size * size} Grassmann elements in row-major order")
    rows = [args.entries[i * size:(i + 1) * size] for i in range(size)]
    g = SuperMatrix.build(m, n, rows, args.generators)
    return Report("ber", "pass", (("size", f"{m}|{n}"), ("berezinian", str(berezinian(g)))))


COMMANDS: dict[str, Callable] = {
    "catalog": cmd_catalog,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "recognize": cmd_recognize,
    "equiv": cmd_equiv,
    "realize": cmd_realize,
    "forms": cmd_forms,
    "ber": cmd_ber,
}


# --------------------------------------------------------------------------
# argument parsing and output


def _add_sources(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="inputs", action="append", metavar="FILE", help="document path, or - for stdin")
    p.add_argument("--family", action="append", nargs="+", metavar="ARG", help="root datum, e.g. --family GL 2 1")
    p.add_argument("--tag", action="append", metavar="TAG", help="root system tag, e.g. 'osp(3|2)'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superdatum", description=__doc__)
    parser.add_argument("--format", choices=("table", "machine"), default="table")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("table", "machine"), default=argparse.SUPPRESS)
        return p

    _add_sources(add("catalog", "list the corpus or emit documents for named objects"))
    p = add("verify", "check the axioms (and structural lemmas for root systems)")
    _add_sources(p)
    p.add_argument("--mode", choices=SPAN_MODES, default="rational")
    _add_sources(add("decompose", "split a root system into irreducible components"))
    _add_sources(add("recognize", "identify the family of an irreducible root system"))
    _add_sources(add("equiv", "search for an equivalence between two root data"))
    for name, help_ in (("realize", "build a superalgebra and check it"), ("forms", "invariant bilinear forms")):
        p = add(name, help_)
        p.add_argument("--in", dest="inputs", action="append", metavar="FILE")
        p.add_argument("--tag", action="append", metavar="TAG")
        p.add_argument("--double-odd", action="store_true", help="duplicate the odd part first")
        p.add_argument("--quotient-center", action="store_true", help="divide by the center first")
        if name == "realize":
            p.add_argument("--emit", action="store_true", help="print the superalgebra document")
    p = add("ber", "Berezinian of a supermatrix, or a multiplicativity sample")
    p.add_argument("--size", nargs=2, type=int, metavar=("M", "N"), default=(1, 1))
    p.add_argument("--generators", type=int, default=4)
    p.add_argument("--entries", nargs="+", metavar="ELEM", help="row-major entries such as 1 t1 t2 1")
    p.add_argument("--check", type=int, metavar="K", help="check Ber(gh) = Ber(g)Ber(h) on K seeded pairs")
    return parser


def render_table(rep: Report) -> str:
    lines = [f"{rep.command}: {rep.status.upper()}"]
    width = max((len(k) for k, _ in rep.entries), default=0)
    lines += [f"  {k.ljust(width)}  {v}" for k, v in rep.entries]
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        out = COMMANDS[args.command](args)
    except (UsageError, DocumentSyntaxError, SchemaError, VersionError, ParameterOutOfRange, MixedKinds,
            OSError) as exc:
        print(f"superdatum {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"superdatum {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(out, str):
        sys.stdout.write(out)
        return EXIT_OK
    sys.stdout.write(serialize(out) if args.format == "machine" else render_table(out))
    return EXIT_OK if out.status == "pass" else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
