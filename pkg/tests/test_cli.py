"""Document parser, exit codes and JSON reports of the command line tool."""

import io
import json
from contextlib import redirect_stderr, redirect_stdout

import pytest

from algebroids.cli import (
    DocumentError,
    document_to_fixture,
    emit_document,
    main,
    parse_document,
)
from algebroids.constructions import fixture_names


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


MINIMAL_DOC = "[chart]\nname = t\ncoords = x1\n[anchor]\nrow = 1\n"


def test_parse_document_errors():
    cases = [
        ("[nope]\n", "unknown section"),
        ("name = t\n", "before any"),
        ("[chart]\nname = t\n[anchor]\nrow = 1\n", "missing [chart] coords"),
        ("[chart]\ncoords = x1\n", "missing [anchor]"),
        ("[chart]\ncoords = x1\n[anchor]\nrow = 1\n[bracket]\n1 2 = 1\n",
         "a b c"),
        ("[chart]\ncoords = x1\n[anchor]\nrow = 1\n[bracket]\n1 q 2 = 1\n",
         "integers"),
        ("[chart]\ncoords = x1\n[anchor]\nrow = 1\n[bracket]\n0 1 2 = 1\n",
         "1-based"),
        ("[chart]\ncoords = x1\n[anchor]\nnotrow\n", "key = value"),
    ]
    for text, needle in cases:
        with pytest.raises(DocumentError) as exc:
            parse_document(text, source="case.alg")
        assert needle in str(exc.value)


def test_parse_error_reports_line_number():
    with pytest.raises(DocumentError) as exc:
        parse_document("[chart]\ncoords = x1\n[oops]\n", source="f.alg")
    assert "f.alg:3" in str(exc.value)


def test_document_to_fixture_shape_errors():
    doc = parse_document(MINIMAL_DOC + "[J]\nrow = 1\nrow = 1\n")
    with pytest.raises(DocumentError):
        document_to_fixture(doc)
    doc = parse_document("[chart]\ncoords = x1\n[anchor]\nrow = 1, 0\n")
    with pytest.raises(DocumentError):
        document_to_fixture(doc)


def test_exit_code_check_failure():
    code, out, err = run_cli(["validate", "heis_broken"])
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    assert report["witnesses"]
    assert "FAILED" in err


def test_exit_code_precondition_failures(tmp_path):
    # non-integrable structure rejected by the matched-pair machinery
    code, _, err = run_cli(["matched-pair", "heis_j"])
    assert code == 3 and "precondition" in err
    # Chern forms need an almost complex (Kahler) Levi-Civita connection
    code, _, _ = run_cli(["chern", "warped_r4"])
    assert code == 3
    # a document without [J] cannot answer J-dependent questions
    doc = tmp_path / "bare.alg"
    doc.write_text(MINIMAL_DOC)
    code, _, err = run_cli(["kahler-report", str(doc)])
    assert code == 3 and "[J]" in err
    # restrict needs a trivial ambient bracket
    proj = tmp_path / "id.proj"
    proj.write_text("[Pi]\nrow = 1, 0, 0, 0\nrow = 0, 1, 0, 0\n"
                    "row = 0, 0, 1, 0\nrow = 0, 0, 0, 1\n"
                    "[lift]\nrow = 1\nrow = 0\nrow = 0\nrow = 0\n")
    code, _, _ = run_cli(["restrict", "heis_j", "--projector", str(proj)])
    assert code == 3


def test_exit_code_document_errors(tmp_path):
    code, _, err = run_cli(["validate", "no_such_fixture"])
    assert code == 2 and "error" in err
    bad = tmp_path / "bad.alg"
    bad.write_text("[chart]\ncoords = x1\n[anchor]\ngarbage\n")
    code, _, _ = run_cli(["validate", str(bad)])
    assert code == 2
    code, _, err = run_cli(["sectional", "flat_r2", "--direction", "1"])
    assert code == 2 and "2 components" in err


def test_fixtures_list():
    code, out, _ = run_cli(["fixtures", "--list"])
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == 1
    assert report["fixtures"] == fixture_names()


def test_report_schema_fields():
    code, out, err = run_cli(["validate", "flat_r2", "--seed", "7"])
    assert code == 0
    report = json.loads(out)
    for key in ("schema_version", "command", "source", "seed", "samples",
                "ok", "checks"):
        assert key in report
    assert report["seed"] == 7
    assert report["ok"] is True
    assert err.strip().endswith("ok")


def test_emit_round_trip(tmp_path):
    code, text, _ = run_cli(["emit", "heis_j"])
    assert code == 0
    fx = document_to_fixture(parse_document(text, source="emitted"))
    assert emit_document(fx) == text
    # the emitted document is accepted end to end
    doc = tmp_path / "heis.alg"
    doc.write_text(text)
    code, out, _ = run_cli(["validate", str(doc)])
    assert code == 0 and json.loads(out)["ok"] is True


def test_sectional_constant_curvature():
    code, out, _ = run_cli(["sectional", "conformal_sphere_chart",
                            "--direction", "1, 0"])
    assert code == 0
    assert json.loads(out)["K"] == "1"


def test_deterministic_reports():
    argv = ["second-fundamental", "flat_r2", "--samples", "4", "--seed", "11"]
    first = run_cli(argv)
    second = run_cli(argv)
    assert first == second
    assert first[0] == 0
