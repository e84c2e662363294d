import dataclasses
import json
import subprocess
import sys

import pytest

from milnor_lattices import catalog, suites
from milnor_lattices.cli import main
from milnor_lattices.errors import CatalogIntegrityError
from milnor_lattices.exact import cyclotomic
from milnor_lattices.lattice import save_lattice
from milnor_lattices.report import FAIL, SKIPPED, Report, jsonable


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tpqr_passes_json(capsys):
    code, out, _ = run(capsys, "tpqr", "--p", "3", "--q", "3", "--r", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema_version"] == 1
    assert data["status"] == "pass"
    assert data["counts"]["FAIL"] == 0
    assert "duration_seconds" in data
    ids = {a["id"] for a in data["assertions"]}
    assert {"fixed_gram", "kernel_order", "u2_order"} <= ids
    for a in data["assertions"]:
        assert set(a) >= {"id", "anchor", "tag", "status", "computed", "expected"}
        assert a["tag"] in ("PAPER", "TRIVIAL", "DERIVED")


def test_no_timing_is_byte_stable(capsys):
    argv = ("gamma", "--p", "3", "--q", "3", "--r", "3", "--bound", "3", "--samples", "20",
            "--format", "json", "--no-timing")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert "duration_seconds" not in first[1]


def test_text_format(capsys):
    code, out, _ = run(capsys, "kaenders", "--no-timing")
    assert code == 0
    assert out.startswith("command: kaenders")
    assert out.rstrip().endswith("skipped)")
    assert "[PASS] D4.branch_gram (kaenders/branch-gram, PAPER)" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "lemma42", "--m", "2", "--l", "5", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["command"] == "lemma42 --m 2 --l 5 --target 2"


def test_skipped_does_not_fail(capsys):
    code, out, _ = run(capsys, "exceptional", "--name", "Z12", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["counts"]["SKIPPED"] == 1
    skipped = [a for a in data["assertions"] if a["status"] == SKIPPED]
    assert skipped[0]["note"].startswith("SKIPPED-no-data")


@pytest.mark.parametrize("argv", [
    ("tpqr", "--p", "4", "--q", "3", "--r", "2"),
    ("tpqr", "--p", "2", "--q", "3", "--r", "3"),
    ("exceptional", "--name", "X1"),
    ("gamma", "--p", "5", "--q", "4", "--r", "2"),
    ("lemma42", "--m", "3", "--l", "5"),
    ("lemma42", "--m", "2", "--l", "3", "--target", "5"),
])
def test_invalid_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "invalid input" in err


def test_argparse_error_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["tpqr", "--p", "x"])
    assert e.value.code == 2


def test_missing_data_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "exceptional", "--name", "Q12", "--stokes-file", str(tmp_path / "none.json"))
    assert code == 3
    assert "data unavailable" in err


def test_external_stokes_file(capsys, tmp_path):
    path = tmp_path / "q12.json"
    save_lattice(catalog.exceptional("Q12").lattice, path)
    code, out, _ = run(capsys, "exceptional", "--name", "Q12", "--stokes-file", str(path), "--format", "json")
    assert code == 0
    assert json.loads(out)["counts"]["FAIL"] == 0


def test_external_file_without_provenance(capsys, tmp_path):
    path = tmp_path / "q12.json"
    lat = dataclasses.replace(catalog.exceptional("Q12").lattice, provenance="")
    save_lattice(lat, path)
    code, out, _ = run(capsys, "exceptional", "--name", "Q12", "--stokes-file", str(path), "--format", "json")
    assert code == 1
    (fail,) = [a for a in json.loads(out)["assertions"] if a["status"] == FAIL]
    assert fail["anchor"] == "catalog/integrity"


# ---------------------------------------------------------------------------
# fault injection: a corrupted catalog entry must surface as a named failure


def test_corrupted_tpqr_vector(monkeypatch, capsys):
    real = catalog.t_pqr

    def corrupted(p, q, r):
        m = real(p, q, r)
        b2 = list(m.b2_tilde)
        b2[0] += 1
        return dataclasses.replace(m, b2_tilde=tuple(b2))

    monkeypatch.setattr(suites, "t_pqr", corrupted)
    code, out, _ = run(capsys, "tpqr", "--p", "6", "--q", "3", "--r", "2", "--format", "json")
    assert code == 1
    failed = {a["id"]: a["anchor"] for a in json.loads(out)["assertions"] if a["status"] == FAIL}
    assert failed["monodromy_b2"] == "tpqr/monodromy-on-fixed"
    assert failed["fixed_gram"] == "tpqr/gram"


def test_catalog_integrity_error(monkeypatch, capsys):
    def broken(p, q, r):
        raise CatalogIntegrityError("arm cycling fails")

    monkeypatch.setattr(suites, "t_pqr", broken)
    code, out, _ = run(capsys, "tpqr", "--p", "3", "--q", "3", "--r", "3")
    assert code == 1
    assert "[FAIL] catalog (catalog/integrity, DERIVED)" in out
    assert "arm cycling fails" in out


def test_corrupted_family_polynomial(monkeypatch, capsys):
    real = catalog.exceptional
    monkeypatch.setattr(suites, "exceptional",
                        lambda name, stokes_file=None: dataclasses.replace(real(name), p2=cyclotomic(5)))
    code, out, _ = run(capsys, "exceptional", "--name", "Q12", "--format", "json")
    assert code == 1
    anchors = {a["anchor"] for a in json.loads(out)["assertions"] if a["status"] == FAIL}
    assert "exceptional/char-poly-table" in anchors


def test_corrupted_family_table(monkeypatch, capsys):
    table = dict(catalog.FAMILIES)
    table["Q12"] = dataclasses.replace(table["Q12"], stabilizer_order=31)
    monkeypatch.setattr(suites, "FAMILIES", table)
    code, out, _ = run(capsys, "exceptional", "--name", "Q12", "--format", "json")
    assert code == 1
    failed = {a["id"] for a in json.loads(out)["assertions"] if a["status"] == FAIL}
    assert failed == {"stabilizer_order", "full_group_order"}


# ---------------------------------------------------------------------------
# report plumbing


def test_report_statuses():
    r = Report("x")
    assert r.check("a", "anchor/a", 1, 1)
    r.skip("b", "anchor/b", "SKIPPED-no-data")
    assert r.exit_code == 0 and r.status == "pass"
    assert not r.holds("c", "anchor/c", False)
    assert r.exit_code == 1 and r.counts() == {"PASS": 1, "FAIL": 1, "SKIPPED": 1}
    with pytest.raises(ValueError):
        r.check("d", "anchor/d", 1, 1, tag="GUESS")


def test_report_section_catches_library_errors():
    r = Report("x")
    with r.section("block", "anchor/block"):
        raise CatalogIntegrityError("broken")
    assert r.exit_code == 1
    (a,) = r.assertions
    assert (a.id, a.anchor, a.status) == ("block", "anchor/block", FAIL)
    assert "CatalogIntegrityError" in a.note
    with pytest.raises(ZeroDivisionError):
        with r.section("other", "anchor/other"):
            1 / 0


def test_jsonable_exact_values():
    from fractions import Fraction

    from milnor_lattices.exact import IntPoly, Matrix

    assert jsonable(Fraction(3, 4)) == "3/4"
    assert jsonable(Fraction(4, 2)) == 2
    assert jsonable(Matrix([[Fraction(1, 2), 1]])) == [["1/2", 1]]
    assert jsonable(IntPoly([1, 0, 1])) == [1, 0, 1]
    assert jsonable({(1, 2)}) == [[1, 2]]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "milnor_lattices", "tpqr", "--p", "4", "--q", "3", "--r", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
