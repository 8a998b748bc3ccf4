"""Description grammar, exit codes, and report plumbing."""

import json
import math
import subprocess
import sys

import pytest

from bitension._rational import RAT
from bitension import cli
from bitension.catalog import make_identity_sphere, make_pi
from bitension.cli import build_map, main, maps_equal, parse_map
from bitension.errors import MapParseError, UnsupportedDensity


class TestParseMap:
    def test_positions_in_errors(self):
        with pytest.raises(MapParseError) as err:
            parse_map("cone(pi(5)")
        assert err.value.position == 10
        with pytest.raises(MapParseError) as err:
            parse_map("cone(pi(5), 0.75)")
        assert err.value.position == 13

    def test_fraction_argument(self):
        node = parse_map("curve_s3(3/2)")
        assert node.args == (RAT(3, 2),)

    def test_nested_nodes(self):
        node = parse_map("join(pi(5), mu(5), 1/3)")
        assert node.name == "join"
        assert node.args[0].name == "pi" and node.args[0].args == (5,)
        assert node.args[2] == RAT(1, 3)

    def test_trailing_input(self):
        with pytest.raises(MapParseError, match="trailing"):
            parse_map("pi(5) mu(3)")

    def test_zero_denominator(self):
        with pytest.raises(MapParseError, match="denominator"):
            parse_map("cone(pi(5), 1/0)")


class TestBuildMap:
    def test_catalog_constructors(self):
        for text, name in [
            ("pi(5)", "pi(5)"),
            ("mu(3)", "mu(3)"),
            ("nu(4)", "nu(4)"),
            ("identity(3)", "identity_sphere(3)"),
            ("identity_sphere(3)", "identity_sphere(3)"),
            ("eigenmap(quadratic, 2)", "eigenmap(quadratic, 2)"),
            ("eigenmap(cubic, 2)", "eigenmap(cubic, 2)"),
            ("eigenmap(hopf)", "eigenmap(hopf)"),
            ("curve_s2", "curve_s2()"),
        ]:
            assert build_map(parse_map(text)).name == name

    def test_cone_with_explicit_angle(self):
        u = build_map(parse_map("cone(pi(5), 3/4)"))
        assert u.name == "cone(pi(5), 3/4)"

    def test_omitted_angle_is_solved(self):
        u = build_map(parse_map("cone(pi(5))"), flavor="biharmonic")
        assert u.name == "cone(pi(5), 3/4)"
        w = build_map(parse_map("cone(identity(2))"), flavor="cbiharmonic")
        assert w.name == "cone(identity_sphere(2), 1/3)"

    def test_angle_range_enforced(self):
        with pytest.raises(ValueError, match="outside"):
            build_map(parse_map("cone(pi(5), 5/4)"))

    def test_diagnostics(self):
        with pytest.raises(MapParseError, match="unknown map constructor"):
            build_map(parse_map("sigma(5)"))
        with pytest.raises(MapParseError, match="unknown eigenmap kind"):
            build_map(parse_map("eigenmap(quartic, 3)"))
        with pytest.raises(MapParseError, match="argument"):
            build_map(parse_map("pi(5, 6)"))
        with pytest.raises(MapParseError, match="argument"):
            build_map(parse_map("cone(3/4)"))

    def test_structural_equality_helper(self):
        assert maps_equal(make_pi(5), make_pi(5))
        assert not maps_equal(make_pi(5), make_pi(4))
        assert not maps_equal(make_pi(3), make_identity_sphere(2))


class TestEmitRoundTrip:
    @pytest.mark.parametrize("text", cli.emit_descriptions())
    def test_reparses_to_identical_map(self, text):
        first = build_map(parse_map(text))
        second = build_map(parse_map(text))
        assert maps_equal(first, second)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCatalogCommand:
    def test_lists_ranges_and_formulas(self, capsys):
        code, out, _ = run_cli(capsys, "catalog")
        assert code == 0
        assert "4 <= m <= 6" in out
        assert "(3/2)(m-3)/(m-1)" in out

    def test_family_filter(self, capsys):
        code, out, _ = run_cli(capsys, "catalog", "--family", "w2")
        assert code == 0
        assert "(m-4)/(m+2)" in out
        assert "pi_cone" not in out

    def test_unknown_family_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "catalog", "--family", "sigma")
        assert code == 1
        assert "unknown family" in err

    def test_emit_lines_parse(self, capsys):
        code, out, _ = run_cli(capsys, "catalog", "--emit")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == len(cli.emit_descriptions())
        for line in lines:
            build_map(parse_map(line))


class TestSolveCommand:
    def test_prints_fraction_and_decimal(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--map", "cone(pi(5))")
        assert code == 0
        assert "t = 3/4 = 0.75" in out

    def test_inadmissible_still_prints_value(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--map", "cone(pi(7))")
        assert code == 2
        assert "t = 1 = 1.0" in out

    def test_conformal_flavor(self, capsys):
        code, out, _ = run_cli(
            capsys, "solve", "--map", "cone(identity_sphere(3))", "--flavor", "cbiharmonic"
        )
        assert code == 0
        assert "t = 1/2" in out

    def test_join_solve(self, capsys):
        code, out, _ = run_cli(capsys, "solve", "--map", "join(mu(5), nu(5))")
        assert code == 0
        assert "t = 3/8" in out

    def test_parse_error_exit(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--map", "cone(pi(5)")
        assert code == 1
        assert "position" in err

    def test_unsupported_density_exit(self, capsys, monkeypatch):
        def explode(v):
            raise UnsupportedDensity("density shape outside the solvable table")

        monkeypatch.setitem(cli._CONE_SOLVERS, "biharmonic", explode)
        code, _, err = run_cli(capsys, "solve", "--map", "cone(pi(5))")
        assert code == 3
        assert "density" in err

    def test_degenerate_join_exit(self, capsys):
        code, _, err = run_cli(capsys, "solve", "--map", "join(identity(4), identity(4))")
        assert code == 2
        assert "harmonic join" in err


class TestVerifyCommand:
    def test_map_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--map", "cone(mu(3), 1/3)", "--samples", "8")
        assert code == 0
        assert out.endswith("PASSED\n")

    def test_map_fail(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--map", "cone(mu(3), 1/2)", "--samples", "8")
        assert code == 4
        assert "witness" in out

    def test_curve_routes_to_curve_checker(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--map", "curve_s3(3/2)")
        assert code == 0
        assert "curve_s3" in out

    def test_needs_one_source(self, capsys):
        code, _, err = run_cli(capsys, "verify")
        assert code == 1
        code, _, err = run_cli(
            capsys, "verify", "--map", "pi(4)", "--suite"
        )
        assert code == 1

    def test_suite_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--suite", "--samples", "2", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        assert len(doc["cases"]) > 70


class TestEnergyCommand:
    def test_monte_carlo_energy(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "energy", "--map", "cone(identity(3), 1/2)",
            "--flavor", "E2", "--samples", "20000", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        target = 9.0 / 8.0 * 2.0 * math.pi**2
        entry = doc["energies"][0]
        assert abs(entry["value"] - target) <= 3.0 * max(entry["std_error"], 1e-9) + 1e-6

    def test_harmonic_map_bienergy_vanishes(self, capsys):
        code, out, _ = run_cli(
            capsys, "energy", "--map", "identity(3)", "--flavor", "E2",
            "--samples", "5000", "--format", "json",
        )
        assert code == 0
        assert abs(json.loads(out)["energies"][0]["value"]) < 1e-9

    def test_non_closed_domain_rejected(self, capsys):
        code, _, err = run_cli(capsys, "energy", "--map", "pi(4)", "--flavor", "E2")
        assert code == 2
        assert "closed" in err

    def test_curve_energy_is_exact(self, capsys):
        code, out, _ = run_cli(
            capsys, "energy", "--map", "curve_s2", "--flavor", "E2", "--format", "json"
        )
        assert code == 0
        entry = json.loads(out)["energies"][0]
        assert entry["std_error"] == 0.0
        assert "exact" in entry["scheme"]


class TestReports:
    def test_byte_identical_for_identical_inputs(self, capsys):
        argv = ("verify", "--map", "cone(mu(3), 1/3)", "--samples", "8", "--format", "json")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first.encode() == second.encode()

    def test_seed_changes_report(self, capsys):
        base = ("verify", "--map", "cone(mu(3), 1/3)", "--samples", "8", "--format", "json")
        _, first, _ = run_cli(capsys, *base)
        _, second, _ = run_cli(capsys, *base, "--seed", "1")
        assert first != second

    def test_schema_and_sections(self, capsys):
        _, out, _ = run_cli(
            capsys, "solve", "--map", "cone(pi(5))", "--format", "json"
        )
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert set(doc) >= {"tool", "run", "cases", "angles", "energies", "passed"}
        assert doc["angles"][0]["t"] == "3/4"

    def test_report_roundtrip(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        code, out, _ = run_cli(
            capsys,
            "verify", "--map", "cone(mu(3), 1/3)", "--samples", "8",
            "--format", "json", "--out", str(path),
        )
        assert code == 0 and out == ""
        code, out, _ = run_cli(capsys, "report", str(path))
        assert code == 0
        assert out.endswith("PASSED\n")

    def test_report_ignores_unknown_fields(self, capsys, tmp_path):
        path = tmp_path / "future.json"
        doc = {"schema_version": 7, "passed": True, "cases": [], "novel_section": {"x": 1}}
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(capsys, "report", str(path))
        assert code == 0

    def test_report_propagates_failure(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"schema_version": 1, "passed": False, "cases": []}))
        assert run_cli(capsys, "report", str(path))[0] == 4

    def test_report_rejects_garbage(self, capsys, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("not json at all")
        assert run_cli(capsys, "report", str(path))[0] == 1
        assert run_cli(capsys, "report", str(tmp_path / "missing.json"))[0] == 1

    def test_unwritable_out_is_io_error(self, capsys, tmp_path):
        target = tmp_path / "no" / "such" / "dir" / "x.json"
        code, _, err = run_cli(
            capsys, "solve", "--map", "cone(pi(5))", "--out", str(target)
        )
        assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bitension", "catalog", "--family", "w1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "2(m-4)/(m+1)" in proc.stdout
