"""Tests for the tracecalc command line."""

import csv
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from tracecalc import __version__
from tracecalc.cli.commands import app
from tracecalc.cli.output import MC_COLUMNS, format_number, manifest_path, render_csv
from tracecalc.utils.helpers import run_stem, safe_filename

runner = CliRunner()


@pytest.fixture(autouse=True)
def isolated_home(tmp_path: Path, monkeypatch):
    """Keep config and cache lookups inside tmp_path."""
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setenv("HOME", str(home))
    monkeypatch.setenv("TRACECALC_CACHE", str(home / "cache" / "semigroup.json"))
    return home


def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


# ── Output helpers ──────────────────────────────────────────────────


class TestOutput:
    def test_number_format_roundtrips(self):
        assert float(format_number(0.1)) == 0.1
        assert format_number(1.0) == "1"

    def test_render_csv(self):
        text = render_csv(("a", "b"), [{"a": 1, "b": 0.5}, {"a": 2}])
        assert text == "a,b\n1,0.5\n2,\n"

    def test_manifest_path(self, tmp_path: Path):
        assert manifest_path(tmp_path / "run.csv") == tmp_path / "run.manifest.json"

    def test_run_stem_is_one_component(self):
        stem = run_stem("mc run/gl")
        assert stem.startswith("mc_run_gl-")
        assert safe_filename("  a b  ") == "a_b"
        assert safe_filename("//") == "run"


# ── transform ───────────────────────────────────────────────────────


class TestTransform:
    def test_limit_writes_json_csv_and_manifest(self, tmp_path: Path):
        out = tmp_path / "q.json"
        result = runner.invoke(app, ["transform", "--power", "2", "--t", "1", "--limit", "--out", str(out)])
        assert result.exit_code == 0, result.output

        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["limit"] is True
        assert [entry["power"] for entry in document["q"]] == [2, 1]

        rows = read_csv(out.with_suffix(".csv"))
        assert [r["power"] for r in rows] == ["2", "1"]
        assert float(rows[1]["value"]) == pytest.approx(-0.36787944117144233)

        manifest = json.loads(manifest_path(out).read_text(encoding="utf-8"))
        assert manifest["command"] == "transform"
        assert manifest["version"] == __version__
        assert str(out) in manifest["outputs"]

    def test_limit_populates_cache(self, isolated_home: Path):
        result = runner.invoke(app, ["transform", "--power", "3", "--t", "1/2", "--limit"])
        assert result.exit_code == 0, result.output
        assert (isolated_home / "cache" / "semigroup.json").exists()

    def test_finite_n(self, tmp_path: Path):
        out = tmp_path / "finite.json"
        result = runner.invoke(app, ["transform", "-k", "2", "--t", "1", "--N", "4", "--out", str(out)])
        assert result.exit_code == 0, result.output
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["N"] == 4
        rows = read_csv(out.with_suffix(".csv"))
        assert {r["monomial"] for r in rows} == {"u^2", "u*v1"}

    def test_polynomial_argument(self):
        result = runner.invoke(app, ["transform", "--poly", '{"u*v1": 1}', "--t", "1", "--limit", "--no-cache"])
        assert result.exit_code == 0, result.output

    def test_polynomial_file(self, tmp_path: Path):
        source = tmp_path / "p.json"
        source.write_text('{"u^2": 1, "v2": "-1/2"}', encoding="utf-8")
        result = runner.invoke(app, ["transform", "--poly", str(source), "--t", "2", "--N", "3"])
        assert result.exit_code == 0, result.output

    def test_needs_n_or_limit(self):
        result = runner.invoke(app, ["transform", "--power", "2", "--t", "1"])
        assert result.exit_code == 2

    def test_decimal_time_needs_float(self):
        args = ["transform", "--power", "2", "--t", "0.5", "--limit", "--no-cache"]
        assert runner.invoke(app, args).exit_code == 2
        assert runner.invoke(app, [*args, "--float"]).exit_code == 0

    def test_negative_time(self):
        result = runner.invoke(app, ["transform", "--power", "1", "--t=-1", "--limit"])
        assert result.exit_code == 2

    def test_bad_polynomial(self):
        result = runner.invoke(app, ["transform", "--poly", "u^2 +", "--t", "1", "--limit"])
        assert result.exit_code == 2

    def test_block_cap_exit_code(self, monkeypatch):
        monkeypatch.setenv("TRACECALC_HEAT__BLOCK_CAP", "100")
        result = runner.invoke(app, ["transform", "--power", "12", "--t", "1", "--N", "4"])
        assert result.exit_code == 3

    def test_max_grade_exit_code(self, monkeypatch):
        monkeypatch.setenv("TRACECALC_HEAT__MAX_GRADE", "3")
        result = runner.invoke(app, ["transform", "--power", "4", "--t", "1", "--limit"])
        assert result.exit_code == 3
        assert "maxGrade" in result.output
        ok = runner.invoke(app, ["transform", "--power", "3", "--t", "1", "--limit"])
        assert ok.exit_code == 0, ok.output


# ── moments, inverse, genfun ────────────────────────────────────────


class TestMoments:
    def test_large_n(self, tmp_path: Path):
        out = tmp_path / "moments.csv"
        result = runner.invoke(app, ["moments", "--kmax", "3", "--t", "1", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert [r["k"] for r in rows] == ["1", "2", "3"]
        assert list(rows[0]) == ["k", "decay", "body", "value"]
        assert float(rows[1]["value"]) == pytest.approx(0.0, abs=1e-15)

    def test_finite_n(self, tmp_path: Path):
        out = tmp_path / "finite.csv"
        result = runner.invoke(app, ["moments", "--kmax", "2", "--t", "1", "--N", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert list(rows[0]) == ["k", "N", "t", "value_re", "value_im"]
        assert float(rows[0]["value_re"]) == pytest.approx(0.6065306597126334)

    def test_finite_n_needs_time(self):
        assert runner.invoke(app, ["moments", "--N", "2"]).exit_code == 2

    def test_symbolic(self):
        result = runner.invoke(app, ["moments", "--kmax", "2", "--no-cache"])
        assert result.exit_code == 0, result.output

    def test_max_grade_caps_kmax(self, monkeypatch):
        monkeypatch.setenv("TRACECALC_HEAT__MAX_GRADE", "3")
        assert runner.invoke(app, ["moments", "--kmax", "4"]).exit_code == 3


class TestInverse:
    def test_z_squared(self, tmp_path: Path):
        out = tmp_path / "inverse.csv"
        result = runner.invoke(app, ["inverse", "--power", "2", "--t", "1", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert [r["power"] for r in rows] == ["2", "1"]
        assert float(rows[0]["value"]) == pytest.approx(2.718281828459045)

    def test_negative_power(self):
        assert runner.invoke(app, ["inverse", "--power=-1"]).exit_code == 2


class TestGenfun:
    def test_coefficients(self, tmp_path: Path):
        out = tmp_path / "phi.csv"
        result = runner.invoke(app, ["genfun", "--s", "1", "--t", "1", "-K", "4", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert list(rows[0]) == ["k", "j", "coeff_re", "coeff_im"]
        assert {r["k"] for r in rows} == {"1", "2", "3", "4"}

    def test_residual_table(self):
        result = runner.invoke(app, ["genfun", "--s", "1", "--t", "1/2", "-K", "4", "--residual"])
        assert result.exit_code == 0, result.output

    def test_outside_domain(self):
        assert runner.invoke(app, ["genfun", "--s", "1", "--t", "3"]).exit_code == 2


# ── mc, verify, config ──────────────────────────────────────────────


class TestMonteCarlo:
    def test_trace_run(self, tmp_path: Path):
        out = tmp_path / "mc.csv"
        args = [
            "mc", "run", "--experiment", "trace", "--group", "u", "--N", "2",
            "--t", "1/10", "--paths", "8", "--step", "0.05", "--workers", "1", "--out", str(out),
        ]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert tuple(rows[0]) == MC_COLUMNS
        assert rows[0]["n_paths"] == "8"
        manifest = json.loads(manifest_path(out).read_text(encoding="utf-8"))
        assert manifest["seed"] == 0

    def test_default_output_goes_to_runs_dir(self, isolated_home: Path):
        args = ["mc", "run", "-e", "trace", "-g", "u", "--N", "1", "--t", "1/10",
                "--paths", "4", "--step", "0.05", "--workers", "1"]
        result = runner.invoke(app, args)
        assert result.exit_code == 0, result.output
        written = list((isolated_home / ".tracecalc" / "runs").glob("mc-trace-u-*.csv"))
        assert len(written) == 1
        assert manifest_path(written[0]).exists()

    def test_unknown_experiment(self):
        assert runner.invoke(app, ["mc", "run", "--experiment", "speed"]).exit_code == 2


class TestVerify:
    def test_magic_suite(self):
        result = runner.invoke(app, ["verify", "--suite", "magic"])
        assert result.exit_code == 0, result.output

    def test_unknown_suite(self):
        assert runner.invoke(app, ["verify", "--suite", "bogus"]).exit_code == 2


class TestSelfTest:
    def test_prints_banner(self, monkeypatch):
        from tracecalc.verify import SuiteReport, suites

        monkeypatch.setattr(suites, "selftest", lambda **kwargs: SuiteReport("selftest"))
        result = runner.invoke(app, ["selftest", "--skip-mc"])
        assert result.exit_code == 0, result.output
        assert f"tracecalc v{__version__}" in result.output


class TestConfigShow:
    def test_show(self):
        result = runner.invoke(app, ["config", "show"])
        assert result.exit_code == 0, result.output
        assert "Config:" in result.output
        assert "blockCap" in result.output

    def test_version(self):
        result = runner.invoke(app, ["--version"])
        assert result.exit_code == 0
        assert __version__ in result.output
