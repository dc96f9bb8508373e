import io

import pytest

from superdatum.catalog import build_grs
from superdatum.cli import main
from superdatum.document import Report, dumps, loads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_lists_corpus(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and out.startswith("catalog: PASS")
    assert "F4 dim" in out and "SL 2 1" in out


def test_catalog_emits_documents(capsys):
    code, out, _ = run(capsys, "catalog", "--tag", "osp(3|2)")
    assert code == 0 and loads(out) == build_grs("osp(3|2)")


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "--family", "SL", "2", "1", "--mode", "strict")
    assert code == 0
    code, out, _ = run(capsys, "verify", "--family", "GL", "1", "1", "--mode", "strict")
    assert code == 1 and "BQR(2)" in out and "rank deficit 1" in out


def test_verify_grs_includes_lemmas(capsys):
    code, out, _ = run(capsys, "verify", "--tag", "G3")
    assert code == 0 and "lemma_string_bound" in out


def test_machine_format_is_a_report_document(capsys):
    code, out, _ = run(capsys, "--format", "machine", "recognize", "--tag", "D21a(2)")
    rep = loads(out)
    assert code == 0 and isinstance(rep, Report)
    assert rep.get("family") == ["D21a(1/2)"] and rep.get("parameters") == ["1/2"]


def test_subcommand_format_flag(capsys):
    code, out, _ = run(capsys, "recognize", "--tag", "B(1,1)", "--format", "machine")
    assert code == 0 and loads(out).get("family") == ["B(1,1)"]


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--tag", "F4")
    assert code == 0 and "components  1" in out


def test_equiv(capsys):
    code, out, _ = run(capsys, "equiv", "--family", "GL", "1", "1", "--family", "GL", "2", "1")
    assert code == 1 and "None" in out and "rank mismatch 2 != 3" in out
    code, out, _ = run(capsys, "equiv", "--family", "D21a", "2", "--family", "D21a", "1/2")
    assert code == 0 and "matrix_row" in out


def test_realize_and_emit(capsys):
    code, out, _ = run(capsys, "realize", "--tag", "osp(3|2)")
    assert code == 0 and "matches_catalog  true" in out
    code, out, _ = run(capsys, "realize", "--tag", "gl(1|1)", "--emit")
    assert code == 0 and loads(out).sdim == (2, 2)


def test_realize_double_odd_fails_jacobi(capsys):
    code, out, _ = run(capsys, "realize", "--tag", "sl(2|1)", "--double-odd")
    assert code == 1 and "jacobi" in out and "fail witness" in out


def test_forms(capsys):
    code, out, _ = run(capsys, "forms", "--tag", "D21a(1)")
    assert code == 0 and "nondegenerate  yes" in out
    code, out, _ = run(capsys, "forms", "--tag", "sl(1|1)")
    assert code == 1 and "certificate" in out


def test_ber(capsys):
    code, out, _ = run(capsys, "ber", "--generators", "2", "--entries", "1", "t1", "t2", "1")
    assert code == 0 and "1 - t1*t2" in out
    code, out, _ = run(capsys, "ber", "--size", "1", "2", "--generators", "3", "--check", "5")
    assert code == 0 and "failures    0" in out


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(dumps(build_grs("C(2)"))))
    code, out, _ = run(capsys, "recognize", "--in", "-")
    assert code == 0 and "C(2)" in out


def test_file_input(capsys, tmp_path):
    path = tmp_path / "g.sd"
    path.write_text(dumps(build_grs("gl(2|1)")))
    code, out, _ = run(capsys, "verify", "--in", str(path), "--mode", "lax")
    assert code == 0 and "BQR(2)              skipped" in out
    # the gl roots miss the center direction
    code, out, _ = run(capsys, "verify", "--in", str(path), "--mode", "rational")
    assert code == 1 and "rank deficit 1" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--tag", "sl(9|)"],
    ["verify", "--family", "XX", "1"],
    ["verify", "--family", "SL", "2", "2"],
    ["verify"],
    ["realize", "--tag", "F4"],
    ["ber", "--entries", "1", "2"],
    ["nope"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


def test_parse_error_reported(capsys, tmp_path):
    path = tmp_path / "bad.sd"
    path.write_text("superdatum 1\nkind grs\ndim x\nend\n")
    code, _, err = run(capsys, "verify", "--in", str(path))
    assert code == 2 and "line 3" in err
