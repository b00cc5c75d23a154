import csv
import io
import json

import pytest
from click.testing import CliRunner

from cyclicfact.cli import CSV_COLUMNS, OutputRecord, compute_record, main, render
from cyclicfact.families import parse_spec


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, list(args))

    return _run


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCompute:
    def test_dihedral_all_methods(self, run):
        r = run("compute", "dihedral:10", "--q", "cf2", "--m", "all", "--format", "json")
        assert r.exit_code == 0
        rec = json.loads(r.output)
        assert rec["cf2_bruteforce"] == rec["cf2_mobius"] == rec["cf2_formula"] == 20
        assert rec["match_flags"] == {"cf2": True} and rec["status"] == "OK"

    def test_symmetric4(self, run):
        r = run("compute", "symmetric:4", "-q", "cf2", "--format", "csv")
        assert r.exit_code == 0
        assert csv_rows(r.output)[0]["cf2_bf"] == "0"

    def test_elementary_abelian(self, run):
        r = run("compute", "abelian:2^1,2^1,2^1", "--q", "cf2,sd", "--format", "json")
        rec = json.loads(r.output)
        assert (rec["cf2_bruteforce"], rec["sd"]) == (0, "1")

    def test_all_quantities_cross_checked(self, run):
        r = run("compute", "symmetric:3", "--m", "all", "--format", "json")
        rec = json.loads(r.output)
        assert r.exit_code == 0
        assert rec["f2"] == rec["f2_mobius"] == 17
        assert rec["sd"] == rec["sd_identity"] == "5/6"
        assert rec["csd"] == rec["csd_identity"] == "19/25"
        assert set(rec["match_flags"]) == {"cf2", "f2", "sd", "csd"}
        assert rec["note"]  # no closed formula for symmetric groups

    def test_text_output_has_header(self, run):
        r = run("compute", "cyclic:12", "-q", "cf2")
        assert r.output.splitlines()[0].split() == list(CSV_COLUMNS)
        r = run("compute", "cyclic:12", "-q", "cf2", "--no-header")
        assert r.output.split()[:3] == ["cyclic:12", "12", "15"]

    def test_parse_error_exit_2(self, run):
        r = run("compute", "dihedral:x")
        assert r.exit_code == 2
        assert "position 9" in r.output

    def test_domain_error_exit_2(self, run):
        assert run("compute", "dihedral:2").exit_code == 2

    def test_capacity_exit_3(self, run):
        assert run("compute", "symmetric:7").exit_code == 3
        assert run("compute", "cyclic:50", "--max-order", "10").exit_code == 3

    def test_bad_quantity(self, run):
        assert run("compute", "cyclic:3", "-q", "banana").exit_code == 2

    def test_failed_record_exit_1(self):
        rec = OutputRecord("x", 1, cf2_bruteforce=3, cf2_formula=4, match_flags={"cf2": False}).finish()
        assert rec.status == "FAILED"
        assert csv_rows(render([rec], "csv", True))[0]["status"] == "FAILED"


class TestTable:
    def test_dihedral_csv(self, run):
        r = run("table", "dihedral", "3..10", "--format", "csv")
        assert r.exit_code == 0
        rows = csv_rows(r.output)
        assert list(rows[0]) == list(CSV_COLUMNS)
        assert [int(x["cf2_bf"]) for x in rows] == list(range(6, 21, 2))
        assert all(x["cf2_bf"] == x["cf2_formula"] for x in rows)

    def test_quaternion(self, run):
        r = run("table", "quaternion", "3..6", "--format", "csv")
        assert [int(x["cf2_bf"]) for x in csv_rows(r.output)] == [6, 8, 16, 32]

    def test_modular2(self, run):
        r = run("table", "modular2", "4..8", "--format", "csv")
        assert [int(x["cf2_bf"]) for x in csv_rows(r.output)] == [14, 18, 22, 26, 30]

    def test_gen_dicyclic_skips_odd(self, run):
        r = run("table", "gendicyclic-ahalf", "2..8", "--format", "csv")
        rows = csv_rows(r.output)
        assert [x["spec"] for x in rows] == [f"gendicyclic:{n},ahalf" for n in (2, 4, 6, 8)]
        assert [int(x["cf2_bf"]) for x in rows] == [10, 0, 24, 0]

    def test_json_no_header(self, run):
        r = run("table", "dicyclic", "1..4", "--format", "json")
        assert [x["cf2_bruteforce"] for x in json.loads(r.output)] == [5, 6, 12, 8]

    def test_deterministic_across_jobs(self, run):
        a = run("table", "dihedral", "3..8", "--format", "csv", "--jobs", "1").output
        b = run("table", "dihedral", "3..8", "--format", "csv", "--jobs", "2").output
        assert a == b

    def test_bad_family_and_range(self, run):
        assert run("table", "klein", "1..3").exit_code == 2
        assert run("table", "dihedral", "3-10").exit_code == 2


class TestVerify:
    def test_dicyclic_scope(self, run):
        r = run("verify", "--scope", "dicyclic")
        assert r.exit_code == 0
        assert "odd n -> 4n, even n -> 2n" in r.output

    def test_identities_scope(self, run):
        r = run("verify", "--scope", "identities")
        assert r.exit_code == 0
        assert "zero residual" in r.output

    def test_unknown_scope(self, run):
        assert run("verify", "--scope", "nope").exit_code == 2

    def test_budget_skips(self, run):
        r = run("verify", "--scope", "quaternion", "--budget", "32")
        assert r.exit_code == 0 and "over budget skipped" in r.output


class TestDumpLattice:
    @pytest.mark.parametrize("spec,count,cyclic", [("cyclic:6", 4, 4), ("dihedral:4", 10, 7), ("quaternion:3", 6, 5)])
    def test_counts(self, run, tmp_path, spec, count, cyclic):
        out = tmp_path / "lat.json"
        r = run("dump-lattice", spec, str(out))
        assert r.exit_code == 0
        doc = json.loads(out.read_text())
        assert len(doc["subgroups"]) == count
        assert sum(s["is_cyclic"] for s in doc["subgroups"]) == cyclic

    def test_q8_mobius_zero(self, run, tmp_path):
        out = tmp_path / "q8.json"
        run("dump-lattice", "quaternion:3", str(out))
        doc = json.loads(out.read_text())
        top = len(doc["subgroups"]) - 1
        assert {(m["h"], m["k"]): m["value"] for m in doc["mobius"]}[(0, top)] == 0

    def test_deterministic(self, run, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run("dump-lattice", "symmetric:4", str(a))
        run("dump-lattice", "symmetric:4", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_io_error_exit_4(self, run, tmp_path):
        r = run("dump-lattice", "cyclic:6", str(tmp_path / "missing" / "x.json"))
        assert r.exit_code == 4


def test_compute_record_api():
    rec = compute_record(parse_spec("modular:3,3"), ("cf2", "sd", "csd"), ("bruteforce", "formula"))
    assert (rec.cf2_bruteforce, rec.cf2_formula, rec.sd, rec.csd, rec.status) == (24, 24, "1", "1", "OK")
