"""End-to-end runs of the command-line entry point.

Each test calls main() with a concrete argv and inspects exit code and output;
the JSON mode round-trips through Report so exact rationals can be compared as
Fractions rather than as strings.
"""

from fractions import Fraction as F

import pytest

from galedemand import QuadraticInverseDemand, gale_spec, samuelson_tower
from galedemand.cli import main
from galedemand.report import Check, Report, decode_value, encode_value

GALE_MATRIX_FILE = "-3 4 0\n0 -3 4\n4 0 -3\n"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--json", *argv)
    return code, Report.from_json(out), err


class TestReport:
    def test_fraction_codec(self):
        assert encode_value(F(5, 2)) == "5/2"
        assert decode_value("5/2") == F(5, 2)
        assert decode_value("-3/4") == F(-3, 4)
        # only the n/d shape decodes; plain strings and decimals survive as-is
        assert decode_value("0.5") == "0.5"
        assert decode_value("n/a") == "n/a"

    def test_nested_structures(self):
        doc = {"point": (1, F(1, 3)), "flag": True, "none": None}
        encoded = encode_value(doc)
        assert encoded == {"point": [1, "1/3"], "flag": True, "none": None}
        assert decode_value(encoded) == {"point": (1, F(1, 3)), "flag": True, "none": None}

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            encode_value(object())

    def test_round_trip(self):
        rep = Report(
            command="demo",
            spec="gale",
            inputs={"price": (F(32, 9), 2)},
            results={"value": -444},
            checks=(Check("a", True, value=F(11, 3), tolerance=1e-6), Check("b", False)),
        )
        assert Report.from_json(rep.to_json()) == rep
        assert not rep.passed

    def test_passed_on_empty_checks(self):
        assert Report(command="c", spec="s").passed

    def test_text_rendering(self):
        rep = Report(
            command="demo",
            spec="gale",
            inputs={"n": 3},
            results={"u": 0.5},
            checks=(Check("good", True, value=1), Check("bad", False, value=2, expected=3)),
        )
        text = rep.to_text()
        assert "[pass] good" in text
        assert "[FAIL] bad" in text
        assert "expected 3" in text
        assert "1/2 checks passed" in text


class TestDemandCommand:
    def test_exact_rational_output(self, capsys):
        code, rep, _ = run_json(capsys, "demand", "8", "4", "2", "--income", "5")
        assert code == 0
        assert rep.spec == "gale"
        assert rep.results["normalized_price"] == (F(32, 9), F(8, 3), 2)
        assert rep.results["demand"] == (0, 0, F(5, 2))
        assert rep.results["spent"] == 5
        assert rep.results["in_cone"] is False

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "demand", "1", "1", "1")
        assert code == 0
        assert "demand: (1/3, 1/3, 1/3)" in out

    def test_symmetric_family(self, capsys):
        code, rep, _ = run_json(
            capsys, "--spec", "symmetric", "demand", "1", "1", "1", "--income", "3"
        )
        assert code == 0
        assert rep.results["demand"] == (1, 1, 1)
        assert "normalized_price" not in rep.results

    def test_bad_literal_is_usage_error(self, capsys):
        code, out, err = run(capsys, "demand", "1", "x", "1")
        assert code == 2
        assert out == ""
        assert "error:" in err

    def test_symmetric_outside_cone_is_usage_error(self, capsys):
        code, _, err = run(capsys, "--spec", "symmetric", "demand", "1", "2", "3")
        assert code == 2
        assert "cone" in err


class TestAxiomsCommand:
    def test_builtin_sarp_violation(self, capsys):
        code, rep, _ = run_json(capsys, "axioms", "builtin")
        assert code == 1
        assert rep.inputs["observations"] == 10
        assert rep.results["cycle"] == tuple(range(10))
        assert [c.name for c in rep.checks] == ["sarp"]
        assert not rep.passed

    def test_builtin_warp_passes(self, capsys):
        code, rep, _ = run_json(capsys, "axioms", "builtin", "--check", "warp")
        assert code == 0
        assert rep.checks[0].name == "warp"
        assert rep.passed

    def test_builtin_extend_fails(self, capsys):
        code, rep, _ = run_json(capsys, "axioms", "builtin", "--check", "extend")
        assert code == 1
        assert rep.results["cycle"] == tuple(range(10))

    def test_acyclic_csv_extends(self, capsys, tmp_path):
        data = tmp_path / "rows.csv"
        data.write_text(
            "p1,p2,p3,m,x1,x2,x3\n"
            "9,16,12,9,1,0,0\n"
            "340,440,330,303,0.6,0,0.3\n"
            "410,400,300,303,0.3,0,0.6\n"
            "16,12,9,9,0,0,1\n"
        )
        code, rep, _ = run_json(capsys, "axioms", str(data), "--check", "extend")
        assert code == 0
        assert rep.results["order"] == (0, 1, 2, 3)

    def test_malformed_csv_is_usage_error(self, capsys, tmp_path):
        data = tmp_path / "bad.csv"
        data.write_text("p1,p2,p3,m,x1,x2,x3\n1,1,1,3,1,1\n")
        code, _, err = run(capsys, "axioms", str(data))
        assert code == 2
        assert "line 2" in err

    def test_missing_file_is_usage_error(self, capsys, tmp_path):
        code, _, err = run(capsys, "axioms", str(tmp_path / "nope.csv"))
        assert code == 2


class TestDiagnoseCommand:
    def test_slutsky_gale(self, capsys):
        code, rep, _ = run_json(capsys, "diagnose", "--test", "slutsky")
        assert code == 0
        names = [c.name for c in rep.checks]
        assert names == ["analytic-vs-fd", "price-null-direction", "asymmetry-present"]
        assert rep.passed

    def test_slutsky_symmetric(self, capsys):
        code, rep, _ = run_json(capsys, "--spec", "symmetric", "diagnose", "--test", "slutsky")
        assert code == 0
        assert "symmetry" in [c.name for c in rep.checks]
        assert rep.passed

    def test_jacobi_both_families(self, capsys):
        code, rep, _ = run_json(capsys, "diagnose", "--test", "jacobi")
        assert code == 0
        assert "residual-nonzero" in [c.name for c in rep.checks]
        code, rep, _ = run_json(
            capsys, "--spec", "symmetric", "diagnose", "--test", "jacobi", "--samples", "20"
        )
        assert code == 0
        assert "residual-vanishes" in [c.name for c in rep.checks]

    def test_definiteness(self, capsys):
        code, rep, _ = run_json(capsys, "diagnose", "--test", "definiteness", "--samples", "50")
        assert code == 0
        assert rep.results["sampled_failures"] == 0
        assert rep.passed

    def test_lemma6(self, capsys):
        code, rep, _ = run_json(capsys, "diagnose", "--test", "lemma6", "--samples", "20")
        assert code == 0
        assert rep.checks[0].name == "inverse-pair-gap"
        assert rep.passed

    def test_custom_point(self, capsys):
        code, rep, _ = run_json(
            capsys, "diagnose", "--test", "jacobi", "--point", "2,1,3"
        )
        assert code == 0


class TestPathsCommand:
    def test_trace_with_curve_file(self, capsys, tmp_path):
        out = tmp_path / "curve.csv"
        code, rep, _ = run_json(
            capsys, "paths", "--trace", "2,1,1", "1,2,1", "--out", str(out)
        )
        assert code == 0
        assert 0.9 < rep.results["u"] < 1.1
        assert rep.results["curve_file"] == str(out)
        lines = out.read_text().splitlines()
        assert lines[0] == "t,y1,y2,y3"
        assert len(lines) > 100
        first = [float(v) for v in lines[1].split(",")]
        assert first == [0.0, 2.0, 1.0, 1.0]

    def test_tower(self, capsys):
        code, rep, _ = run_json(capsys, "paths", "--tower", "2,1,1", "1,2,1", "1,1,2")
        assert code == 0
        assert rep.results["deviation"] > 1e-2

    def test_tower_has_no_curve(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "paths", "--tower", "2,1,1", "1,2,1", "1,1,2", "--out",
            str(tmp_path / "x.csv"),
        )
        assert code == 2
        assert "no single curve" in err

    def test_ville_explicit_witness(self, capsys):
        field = QuadraticInverseDemand.from_spec(gale_spec())
        witness = samuelson_tower(field, (2, 1, 1), (1, 2, 1), (1, 1, 2)).witness()
        argv = ["paths", "--ville"] + [",".join(repr(c) for c in w) for w in witness]
        code, rep, _ = run_json(capsys, *argv)
        assert code == 0
        assert rep.results["certificate_min"] > 0
        assert rep.results["closure_error"] <= 1e-8
        assert {c.name for c in rep.checks} == {"gain-positive", "loop-closes"}

    def test_ville_auto_search(self, capsys):
        code, rep, _ = run_json(capsys, "paths", "--ville", "--search-samples", "40")
        assert code == 0
        assert rep.inputs["search_samples"] == 40
        assert rep.inputs["tower_deviation"] > 1e-3
        assert rep.passed

    def test_ville_rejected_on_symmetric(self, capsys):
        code, rep, _ = run_json(
            capsys, "--spec", "symmetric", "paths", "--ville", "2,1,1", "1,2,1", "1,1,2"
        )
        assert code == 1
        assert "no intransitivity" in rep.results["reason"]
        assert rep.checks[0].name == "cycle-built"
        assert not rep.checks[0].passed

    def test_ville_wrong_arity(self, capsys):
        code, _, err = run(capsys, "paths", "--ville", "2,1,1", "1,2,1")
        assert code == 2
        assert "three bundles" in err

    def test_bad_vector_literal(self, capsys):
        code, _, err = run(capsys, "paths", "--trace", "2,1", "1,2,1")
        assert code == 2
        assert "3-vector" in err

    def test_steps_override(self, capsys):
        code, rep, _ = run_json(capsys, "paths", "--trace", "2,1,1", "1,2,1", "--steps", "128")
        assert code == 0
        assert rep.results["steps"] <= 128


class TestSpecResolution:
    def test_matrix_file_reproduces_table_row(self, capsys, tmp_path):
        mat = tmp_path / "tilted.txt"
        mat.write_text(GALE_MATRIX_FILE)
        code, rep, _ = run_json(
            capsys, "--spec", str(mat), "demand", "9", "16", "12", "--income", "9"
        )
        assert code == 0
        assert rep.spec == "tilted"
        assert rep.results["demand"] == (1, 0, 0)

    def test_unknown_spec_token(self, capsys):
        code, _, err = run(capsys, "--spec", "cobbdouglas", "demand", "1", "1", "1")
        assert code == 2
        assert "neither" in err

    def test_bad_matrix_file(self, capsys, tmp_path):
        mat = tmp_path / "short.txt"
        mat.write_text("1 2\n3 4 5\n6 7 8\n")
        code, _, err = run(capsys, "--spec", str(mat), "demand", "1", "1", "1")
        assert code == 2
        assert "line 1" in err

    def test_singular_matrix_file(self, capsys, tmp_path):
        mat = tmp_path / "flat.txt"
        mat.write_text("1 1 1\n1 1 1\n1 1 1\n")
        code, _, err = run(capsys, "--spec", str(mat), "demand", "1", "1", "1")
        assert code == 2


class TestReproduceCommand:
    def test_full_battery_passes(self, capsys):
        code, rep, _ = run_json(capsys, "reproduce")
        assert code == 0
        assert rep.passed
        names = [c.name for c in rep.checks]
        assert len(names) == len(set(names)) == 23

    def test_only_filter(self, capsys):
        code, rep, _ = run_json(capsys, "reproduce", "--only", "slutsky")
        assert code == 0
        assert rep.checks
        assert all("slutsky" in c.name for c in rep.checks)

    def test_only_without_match(self, capsys):
        code, _, err = run(capsys, "reproduce", "--only", "zzz")
        assert code == 2
        assert "matched no checks" in err

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "--json", "reproduce", "--only", "ville")
        _, out2, _ = run(capsys, "--json", "reproduce", "--only", "ville")
        assert out1 == out2
