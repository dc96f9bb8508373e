"""Line-oriented text interchange format for GRS, root data, superalgebras and reports.

Every document starts with ``superdatum 1`` and ends with ``end``.  Sections
carry explicit counts so truncation is always detected.  Numbers are exact
rationals written as ``p`` or ``p/q``; vectors are comma separated.  Lines
starting with ``#`` are comments.

    superdatum 1
    kind grs
    name gl(1|1)
    dim 2
    form
      1, 0
      0, -1
    even 0
    odd 2
      1, -1
      -1, 1
    end

Root data list the lattices ``X`` and ``Xdual`` as ``ambient relations
constraints`` counts followed by those rows, then ``pairing`` and ``form``
matrices, even rows ``root ; coroot`` and odd rows ``root [; multiplicity]``.
Superalgebras list ``label even|odd`` basis rows, the Cartan labels, an
optional frame and the nonzero brackets ``a, b -> c:coef d:coef`` for
``a <= b`` in basis order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from . import _linalg as la
from .lattice import DualityPairing, Lattice, RationalForm
from .rootdatum import GRS, RootDatum
from .superalgebra import SuperAlgebra

__all__ = [
    "FORMAT_VERSION",
    "DocumentSyntaxError",
    "SchemaError",
    "VersionError",
    "Report",
    "Document",
    "parse_document",
    "serialize",
    "loads",
    "dumps",
]

FORMAT_VERSION = 1
MAGIC = "superdatum"
KINDS = ("grs", "rootdatum", "superalgebra", "report")


class DocumentSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(ValueError):
    def __init__(self, fieldname: str, message: str):
        super().__init__(f"field {fieldname!r}: {message}")
        self.field = fieldname


class VersionError(ValueError):
    pass


@dataclass(frozen=True)
class Report:
    """Command outcome: ``status`` is pass or fail; entries are ordered key/value text pairs."""

    command: str
    status: str
    entries: tuple[tuple[str, str], ...] = ()

    def get(self, key: str) -> list[str]:
        return [v for k, v in self.entries if k == key]


@dataclass(frozen=True)
class Document:
    kind: str
    payload: object
    format_version: int = FORMAT_VERSION
    name: str = field(default="")


# --------------------------------------------------------------------------
# writing


def _num(x) -> str:
    return la.fmt(Fraction(x))


def _row(v) -> str:
    return ", ".join(_num(x) for x in v)


def _matrix(rows) -> list[str]:
    return ["  " + _row(r) for r in rows]


def _lattice_lines(key: str, lat: Lattice) -> list[str]:
    out = [f"{key} {lat.ambient_rank} {len(lat.relations)} {len(lat.constraints)}"]
    out += _matrix(lat.relations) + _matrix(lat.constraints)
    return out


def serialize(obj, name: str = "") -> str:
    """Text for a GRS, RootDatum, SuperAlgebra, Report or Document."""
    if isinstance(obj, Document):
        return serialize(obj.payload, obj.name)
    lines = [f"{MAGIC} {FORMAT_VERSION}"]
    if isinstance(obj, GRS):
        lines += ["kind grs"]
        if name:
            lines.append(f"name {name}")
        lines.append(f"dim {obj.ambient_dim}")
        lines += ["form"] + _matrix(obj.form.matrix)
        lines += [f"even {len(obj.even)}"] + _matrix(obj.even)
        lines += [f"odd {len(obj.odd)}"] + _matrix(obj.odd)
    elif isinstance(obj, RootDatum):
        lines += ["kind rootdatum"]
        if name or obj.name:
            lines.append(f"name {name or obj.name}")
        lines.append(f"rank {obj.rank}")
        lines += _lattice_lines("X", obj.X) + _lattice_lines("Xdual", obj.Xdual)
        lines += ["pairing"] + _matrix(obj.pairing.matrix)
        lines += ["form"] + _matrix(obj.form.matrix)
        lines.append(f"even {len(obj.even_roots)}")
        lines += [f"  {_row(r)} ; {_row(c)}" for r, c in obj.even_roots]
        lines.append(f"odd {len(obj.odd_roots)}")
        lines += [f"  {_row(r)}" + (f" ; {m}" if m != 1 else "") for r, m in obj.odd_roots]
    elif isinstance(obj, SuperAlgebra):
        lines += ["kind superalgebra"]
        if name or obj.name:
            lines.append(f"name {name or obj.name}")
        lines.append(f"basis {obj.dim}")
        lines += [f"  {lab} {'odd' if p else 'even'}" for lab, p in zip(obj.labels, obj.parity)]
        lines.append("cartan " + " ".join(obj.labels[i] for i in obj.cartan) if obj.cartan else "cartan")
        if obj.frame is not None:
            lines += [f"frame {len(obj.frame)}"] + _matrix(obj.frame)
        pairs = sorted((i, j) for i, j in obj.table if i <= j)
        lines.append(f"brackets {len(pairs)}")
        for i, j in pairs:
            rhs = " ".join(f"{obj.labels[k]}:{_num(c)}" for k, c in obj.table[(i, j)])
            lines.append(f"  {obj.labels[i]}, {obj.labels[j]} -> {rhs}")
    elif isinstance(obj, Report):
        lines += ["kind report", f"command {obj.command}", f"status {obj.status}"]
        for k, v in obj.entries:
            if not re.fullmatch(r"[A-Za-z_][\w()]*", k):
                raise ValueError(f"report key {k!r} is not a single word")
            if "\n" in v:
                raise ValueError("report values are single lines")
            lines.append(f"{k} {v}".rstrip())
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines.append("end")
    return "\n".join(lines) + "\n"


dumps = serialize


# --------------------------------------------------------------------------
# reading


_NUM = re.compile(r"-?\d+(?:/\d+)?")


class _Reader:
    def __init__(self, text: str):
        self.lines: list[tuple[int, str, int]] = []  # (line number, content, indent)
        for no, raw in enumerate(text.splitlines(), 1):
            body = raw.rstrip()
            if body.strip() and not body.lstrip().startswith("#"):
                self.lines.append((no, body.strip(), len(body) - len(body.lstrip()) + 1))
        self.pos = 0
        self.last_line = len(text.splitlines())

    def next(self, what: str) -> tuple[int, str, int]:
        if self.pos >= len(self.lines):
            raise DocumentSyntaxError(f"unexpected end of document, expected {what}", self.last_line + 1)
        item = self.lines[self.pos]
        self.pos += 1
        return item

    def peek(self) -> tuple[int, str, int] | None:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def header(self, key: str, nargs: int | None = None) -> tuple[int, list[str]]:
        no, text, _ = self.next(f"'{key}'")
        parts = text.split()
        if parts[0] != key:
            if parts[0] in ("end",) or _NUM.fullmatch(parts[0].rstrip(",")):
                raise DocumentSyntaxError(f"expected '{key}', found {parts[0]!r}", no)
            raise SchemaError(parts[0], f"unexpected field (expected {key!r})")
        args = parts[1:]
        if nargs is not None and len(args) != nargs:
            raise DocumentSyntaxError(f"'{key}' takes {nargs} argument(s)", no)
        return no, args

    def count(self, key: str) -> int:
        no, args = self.header(key, 1)
        return _int(args[0], no, len(key) + 2)


def _int(tok: str, line: int, col: int) -> int:
    if not re.fullmatch(r"-?\d+", tok):
        raise DocumentSyntaxError(f"expected an integer, found {tok!r}", line, col)
    return int(tok)


def _vector(text: str, line: int, col0: int) -> la.Vec:
    if not text.strip():
        return ()
    out = []
    pos = 0
    for tok in text.split(","):
        stripped = tok.strip()
        col = col0 + pos + (len(tok) - len(tok.lstrip()))
        if not _NUM.fullmatch(stripped):
            raise DocumentSyntaxError(f"expected a rational p or p/q, found {stripped!r}", line, col)
        if "/" in stripped and stripped.split("/")[1].strip("0") == "":
            raise DocumentSyntaxError("zero denominator", line, col)
        out.append(Fraction(stripped))
        pos += len(tok) + 1
    return tuple(out)


def _rows(r: _Reader, n: int, width: int | None, what: str) -> list[la.Vec]:
    out = []
    for _ in range(n):
        no, text, col = r.next(f"a row of {what}")
        v = _vector(text, no, col)
        if width is not None and len(v) != width:
            raise SchemaError(what, f"row on line {no} has {len(v)} entries, expected {width}")
        out.append(v)
    return out


def _integral(v, what: str) -> tuple[int, ...]:
    if not la.is_integral(v):
        raise SchemaError(what, f"{la.fmt_vec(v)} must be integral")
    return tuple(int(x) for x in v)


def parse_document(text: str) -> Document:
    r = _Reader(text)
    no, head, _ = r.next("the header")
    parts = head.split()
    if parts[0] != MAGIC:
        raise DocumentSyntaxError(f"document must start with '{MAGIC} <version>'", no)
    if len(parts) != 2 or not parts[1].isdigit():
        raise DocumentSyntaxError("malformed version header", no, len(MAGIC) + 2)
    if int(parts[1]) != FORMAT_VERSION:
        raise VersionError(f"format version {parts[1]} is not supported (expected {FORMAT_VERSION})")
    no, args = r.header("kind", 1)
    kind = args[0]
    if kind not in KINDS:
        raise SchemaError("kind", f"unknown kind {kind!r}")
    name = ""
    nxt = r.peek()
    if nxt and nxt[1].split()[0] == "name":
        no, text, _ = r.next("name")
        name = text[len("name"):].strip()
    payload = {"grs": _parse_grs, "rootdatum": _parse_datum, "superalgebra": _parse_algebra, "report": _parse_report}[kind](r, name)
    no, text, col = r.next("'end'")
    if text != "end":
        key = text.split()[0]
        if _NUM.fullmatch(key.rstrip(",")):
            raise DocumentSyntaxError("more rows than the section count declares", no, col)
        raise SchemaError(key, "unknown field")
    extra = r.peek()
    if extra:
        raise DocumentSyntaxError("content after 'end'", extra[0], extra[2])
    return Document(kind, payload, FORMAT_VERSION, name)


def loads(text: str):
    """Parse and return the payload object."""
    return parse_document(text).payload


def _parse_grs(r: _Reader, name: str) -> GRS:
    d = r.count("dim")
    r.header("form", 0)
    form = _rows(r, d, d, "form")
    even = _rows(r, r.count("even"), d, "even")
    odd = _rows(r, r.count("odd"), d, "odd")
    for parity, vs in (("even", even), ("odd", odd)):
        for v in vs:
            if la.is_zero(v):
                raise SchemaError(parity, "zero root")
    try:
        return GRS(RationalForm(form), tuple(even), tuple(odd))
    except ValueError as exc:
        raise SchemaError("form" if "symmetric" in str(exc) else "roots", str(exc)) from None


def _parse_lattice(r: _Reader, key: str) -> Lattice:
    no, args = r.header(key, 3)
    amb, nrel, ncon = (_int(a, no, 1) for a in args)
    rels = [_integral(v, f"{key}.relations") for v in _rows(r, nrel, amb, f"{key}.relations")]
    cons = [_integral(v, f"{key}.constraints") for v in _rows(r, ncon, amb, f"{key}.constraints")]
    try:
        return Lattice(amb, tuple(rels), tuple(cons))
    except ValueError as exc:
        raise SchemaError(key, str(exc)) from None


def _split_row(r: _Reader, what: str):
    no, text, col = r.next(f"a row of {what}")
    left, sep, right = text.partition(";")
    return no, col, _vector(left, no, col), (right.strip() if sep else None), col + len(left) + 1


def _parse_datum(r: _Reader, name: str) -> RootDatum:
    rank = r.count("rank")
    X = _parse_lattice(r, "X")
    Xd = _parse_lattice(r, "Xdual")
    r.header("pairing", 0)
    pairing = [_integral(v, "pairing") for v in _rows(r, rank, rank, "pairing")]
    r.header("form", 0)
    form = _rows(r, rank, rank, "form")
    even = []
    for _ in range(r.count("even")):
        no, col, root, rest, col2 = _split_row(r, "even")
        if rest is None:
            raise SchemaError("even", f"line {no}: even rows need 'root ; coroot'")
        co = _vector(rest, no, col2)
        if len(root) != rank or len(co) != rank:
            raise SchemaError("even", f"line {no}: expected {rank} coordinates")
        if la.is_zero(root):
            raise SchemaError("even", "zero root")
        even.append((_integral(root, "even"), _integral(co, "even.coroot")))
    odd = []
    for _ in range(r.count("odd")):
        no, col, root, rest, col2 = _split_row(r, "odd")
        if len(root) != rank:
            raise SchemaError("odd", f"line {no}: expected {rank} coordinates")
        mult = 1 if rest is None else _int(rest, no, col2)
        odd.append((_integral(root, "odd"), mult))
    try:
        return RootDatum(X, Xd, DualityPairing(tuple(pairing)), tuple(even), tuple(odd), RationalForm(form), name)
    except ValueError as exc:
        raise SchemaError("rootdatum", str(exc)) from None


def _parse_algebra(r: _Reader, name: str) -> SuperAlgebra:
    n = r.count("basis")
    labels, parity = [], []
    for _ in range(n):
        no, text, col = r.next("a basis row")
        parts = text.split()
        if len(parts) != 2 or parts[1] not in ("even", "odd"):
            raise DocumentSyntaxError("basis rows are '<label> even|odd'", no, col)
        labels.append(parts[0])
        parity.append(int(parts[1] == "odd"))
    if len(set(labels)) != n:
        raise SchemaError("basis", "duplicate labels")
    index = {lab: i for i, lab in enumerate(labels)}

    def lookup(lab, what):
        if lab not in index:
            raise SchemaError(what, f"unknown basis label {lab!r}")
        return index[lab]

    _, args = r.header("cartan")
    cartan = tuple(lookup(a, "cartan") for a in args)
    frame = None
    nxt = r.peek()
    if nxt and nxt[1].split()[0] == "frame":
        rows = r.count("frame")
        frame = tuple(_rows(r, rows, len(cartan), "frame"))
    table: dict[tuple[int, int], tuple] = {}
    for _ in range(r.count("brackets")):
        no, text, col = r.next("a bracket row")
        lhs, arrow, rhs = text.partition("->")
        pair = [p.strip() for p in lhs.split(",")]
        if not arrow or len(pair) != 2:
            raise DocumentSyntaxError("bracket rows are 'a, b -> c:coef ...'", no, col)
        i, j = (lookup(p, "brackets") for p in pair)
        terms = []
        for tok in rhs.split():
            lab, colon, coef = tok.rpartition(":")
            if not colon or not _NUM.fullmatch(coef):
                raise DocumentSyntaxError(f"bad bracket term {tok!r}", no, col + text.index(tok))
            terms.append((lookup(lab, "brackets"), Fraction(coef)))
        table[(i, j)] = tuple(terms)
        if i != j:
            sign = -1 if parity[i] and parity[j] else 1
            table[(j, i)] = tuple((k, -sign * c) for k, c in terms)
    try:
        return SuperAlgebra(tuple(labels), tuple(parity), table, cartan, name, frame)
    except ValueError as exc:
        raise SchemaError("brackets", str(exc)) from None


def _parse_report(r: _Reader, name: str) -> Report:
    _, args = r.header("command", 1)
    command = args[0]
    _, args = r.header("status", 1)
    status = args[0]
    if status not in ("pass", "fail"):
        raise SchemaError("status", f"expected pass or fail, got {status!r}")
    entries = []
    while True:
        nxt = r.peek()
        if nxt is None or nxt[1] == "end":
            break
        no, text, _ = r.next("a report entry")
        key, _, value = text.partition(" ")
        entries.append((key, value.strip()))
    return Report(command, status, tuple(entries))


def iter_documents(text: str) -> Iterator[Document]:
    """Split a stream holding several documents back to back."""
    chunk: list[str] = []
    for line in text.splitlines():
        if line.strip().startswith(MAGIC) and chunk:
            yield parse_document("\n".join(chunk))
            chunk = []
        chunk.append(line)
    if chunk and any(x.strip() for x in chunk):
        yield parse_document("\n".join(chunk))
