"""End-to-end tests of the command-line interface (subprocess level)."""

import json
import re
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from limitcycles.cli import ComparisonRow, RunConfig, build_comparison
from limitcycles.errors import DomainError
from limitcycles.geometry import read_curve
from limitcycles.ham import TABLE_ONLY_CONTROL
from limitcycles.integrator import IntegratorConfig


def run_cli(*args, cwd, env=None):
    return subprocess.run(
        [sys.executable, "-m", "limitcycles", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        env=env,
        timeout=300,
    )


def printed_amplitude(stdout: str) -> float:
    match = re.search(r"amplitude = ([-+0-9.eE]+)", stdout)
    assert match, f"no amplitude line in {stdout!r}"
    return float(match.group(1))


class TestAmplitudeCommand:
    def test_exact_rayleigh_anchor(self, tmp_path):
        result = run_cli(
            "amplitude", "--system", "rayleigh", "--eps", "1", "--method", "exact",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert printed_amplitude(result.stdout) == pytest.approx(2.17271, abs=0.002)
        record = json.loads(
            (tmp_path / "amplitude_rayleigh_exact_eps1.json").read_text()
        )
        assert record["system"] == "rayleigh"
        assert record["method"] == "exact"
        assert record["amplitude"] == pytest.approx(2.17271, abs=0.002)
        assert record["period"] == pytest.approx(6.663, abs=0.01)

    def test_calibrated_closed_form_matches_anchor(self, tmp_path):
        result = run_cli(
            "amplitude", "--system", "rayleigh", "--eps", "1",
            "--method", "irgm", "--preset", "rayleigh",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert printed_amplitude(result.stdout) == pytest.approx(2.1727, abs=1e-3)

    def test_vdp_alias_and_fit_method(self, tmp_path):
        result = run_cli(
            "amplitude", "--system", "vdp", "--eps", "50", "--method", "fit",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert printed_amplitude(result.stdout) == pytest.approx(2.0025, abs=0.01)

    def test_domain_error_exits_one(self, tmp_path):
        result = run_cli(
            "amplitude", "--system", "rayleigh", "--eps", "1", "--method", "fit",
            cwd=tmp_path,
        )
        assert result.returncode == 1
        assert "vanderpol" in result.stderr

    def test_unknown_system_exits_one(self, tmp_path):
        result = run_cli(
            "amplitude", "--system", "duffing", "--eps", "1", "--method", "exact",
            cwd=tmp_path,
        )
        assert result.returncode == 1
        assert "unknown system" in result.stderr


class TestSweepCommand:
    def test_csv_and_svg_artifacts(self, tmp_path):
        result = run_cli(
            "sweep", "--system", "rayleigh", "--grid", "0.5,1,2",
            "--methods", "exact,ham,rg", "--jobs", "3",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        csv_path = tmp_path / "sweep_rayleigh.csv"
        lines = csv_path.read_text().splitlines()
        assert lines[0] == ComparisonRow.CSV_HEADER
        assert len(lines) == 4
        # fixed 12-significant-digit fields
        first = lines[1].split(",")
        assert re.fullmatch(r"5\.00000000000e-01", first[0])
        assert re.fullmatch(r"-?\d\.\d{11}e[+-]\d{2,3}", first[1])
        # tuned expansion stays under a percent on this grid
        rel = [float(line.split(",")[5]) for line in lines[1:]]
        assert max(rel) < 1.0
        svg = (tmp_path / "sweep_rayleigh.svg").read_text()
        ET.fromstring(svg)  # well-formed XML
        assert "series exact" in svg and "x: " in svg  # embedded numeric data
        assert "href" not in svg  # self-contained

    def test_deterministic_output(self, tmp_path):
        for sub in ("a", "b"):
            (tmp_path / sub).mkdir()
            result = run_cli(
                "sweep", "--system", "vdp", "--grid", "1,2",
                "--methods", "exact,fit", "--output-dir", sub,
                cwd=tmp_path,
            )
            assert result.returncode == 0, result.stderr
        assert (tmp_path / "a/sweep_vanderpol.csv").read_bytes() == (
            tmp_path / "b/sweep_vanderpol.csv"
        ).read_bytes()

    def test_irgm_and_fit_conflict(self, tmp_path):
        result = run_cli(
            "sweep", "--system", "vdp", "--grid", "1", "--methods", "irgm,fit",
            cwd=tmp_path,
        )
        assert result.returncode == 1
        assert "share the closed-form column" in result.stderr

    def test_range_grid_parsing(self, tmp_path):
        result = run_cli(
            "sweep", "--system", "vdp", "--grid", "1:2:0.5", "--methods", "fit",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        lines = (tmp_path / "sweep_vanderpol.csv").read_text().splitlines()
        eps = [float(line.split(",")[0]) for line in lines[1:]]
        assert eps == [1.0, 1.5, 2.0]


class TestCycleCommand:
    def test_appendix_table_audit(self, tmp_path):
        result = run_cli(
            "cycle", "--system", "vdp", "--eps", "5", "--appendix-c",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        assert "piece 8 is non-real" in result.stdout
        assert "right side non-real" in result.stdout
        assert (tmp_path / "cycle_vanderpol_eps5.csv").exists()
        svg = (tmp_path / "phase_vanderpol_eps5.svg").read_text()
        ET.fromstring(svg)
        assert "published table" in svg

    def test_bundled_tables_only_at_eps_five(self, tmp_path):
        result = run_cli(
            "cycle", "--system", "vdp", "--eps", "2", "--appendix-c",
            cwd=tmp_path,
        )
        assert result.returncode == 1
        assert "eps = 5" in result.stderr

    def test_fit_overlay_writes_curve(self, tmp_path):
        result = run_cli(
            "cycle", "--system", "rayleigh", "--eps", "5", "--fit", "0.1",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        curve = read_curve(tmp_path / "fit_rayleigh_eps5.curve")
        assert 1 <= len(curve.pieces) <= 20
        assert "max distance" in result.stdout


class TestFitCommand:
    def test_writes_loadable_curve(self, tmp_path):
        result = run_cli(
            "fit", "--system", "vdp", "--eps", "5", "--tol", "0.1",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        curve = read_curve(tmp_path / "fit_vanderpol_eps5.curve")
        assert len(curve.pieces) <= 20
        assert curve.symmetric

    def test_piece_budget_failure_exits_two(self, tmp_path):
        result = run_cli(
            "fit", "--system", "vdp", "--eps", "5", "--tol", "0.01",
            "--max-pieces", "2",
            cwd=tmp_path,
        )
        assert result.returncode == 2
        assert "more than 2 pieces" in result.stderr


class TestOutputDirResolution:
    def test_env_var_override(self, tmp_path, monkeypatch):
        import os

        target = tmp_path / "from_env"
        env = dict(os.environ, LIMITCYCLES_OUTPUT_DIR=str(target))
        result = run_cli(
            "amplitude", "--system", "vdp", "--eps", "1", "--method", "fit",
            cwd=tmp_path, env=env,
        )
        assert result.returncode == 0, result.stderr
        assert (target / "amplitude_vanderpol_fit_eps1.json").exists()

    def test_flag_beats_env(self, tmp_path):
        import os

        env = dict(os.environ, LIMITCYCLES_OUTPUT_DIR=str(tmp_path / "ignored"))
        result = run_cli(
            "amplitude", "--system", "vdp", "--eps", "1", "--method", "fit",
            "--output-dir", "flagged",
            cwd=tmp_path, env=env,
        )
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "flagged/amplitude_vanderpol_fit_eps1.json").exists()
        assert not (tmp_path / "ignored").exists()


class TestReportCommand:
    def test_bundle_contents(self, tmp_path):
        config = RunConfig(eps_grid=(1.0, 5.0), output_dir=str(tmp_path / "bundle"))
        (tmp_path / "run.json").write_text(config.to_json())
        result = run_cli(
            "report", "--config", "run.json", "--jobs", "4",
            cwd=tmp_path,
        )
        assert result.returncode == 0, result.stderr
        bundle = tmp_path / "bundle"
        for name in (
            "anchors.json",
            "rayleigh_comparison.csv",
            "rayleigh_amplitude.svg",
            "vdp_comparison.csv",
            "vdp_amplitude.svg",
            "phase_rayleigh_eps5.svg",
            "phase_vanderpol_eps5.svg",
            "fit_rayleigh_eps5.curve",
            "fit_vanderpol_eps5.curve",
            "discrepancy_notes.txt",
        ):
            assert (bundle / name).exists(), name
        anchors = json.loads((bundle / "anchors.json").read_text())
        assert all(a["status"] == "ok" for a in anchors)
        notes = (bundle / "discrepancy_notes.txt").read_text()
        # the calibration inconsistency must be detected and reported
        assert "INCONSISTENT" in notes
        assert "4.08785" in notes
        # the published table defects are part of the bundle
        assert "piece 8 is non-real" in notes
        # so is the amplitude-maximum location disagreement
        assert "amplitude maximum" in notes


class TestRunConfig:
    def test_json_round_trip(self):
        config = RunConfig(
            system="vdp",
            eps_grid=(0.5, 1.0, 2.0),
            integrator=IntegratorConfig(rel_tol=1e-8, n_samples=500),
            ham_control=TABLE_ONLY_CONTROL,
            irgm_preset="vdp-consistent",
            output_dir="artifacts",
        )
        assert RunConfig.from_json(config.to_json()) == config

    def test_defaults_round_trip(self):
        assert RunConfig.from_json(RunConfig().to_json()) == RunConfig()

    def test_zero_config_is_valid(self):
        config = RunConfig()
        assert config.system == "rayleigh"
        assert config.eps_grid[0] == 0.5 and config.eps_grid[-1] == 50.0

    def test_grid_validation(self):
        with pytest.raises(DomainError, match="strictly increasing"):
            RunConfig(eps_grid=(2.0, 1.0))
        with pytest.raises(DomainError, match="positive"):
            RunConfig(eps_grid=(-1.0, 1.0))
        with pytest.raises(DomainError, match="empty"):
            RunConfig(eps_grid=())

    def test_preset_validation(self):
        with pytest.raises(DomainError, match="preset"):
            RunConfig(irgm_preset="nonsense")


class TestBuildComparison:
    def test_rows_follow_error_definition(self):
        rows = build_comparison(
            "vanderpol", (1.0, 2.0), ("fit",),
        )
        assert all(r.a_exact is None and r.rel_err_irgm is None for r in rows)
        rows = build_comparison(
            "vanderpol", (1.0,), ("exact", "fit"),
            config=IntegratorConfig(),
        )
        row = rows[0]
        expected = abs((row.a_exact - row.a_irgm) / row.a_exact) * 100.0
        assert row.rel_err_irgm == pytest.approx(expected, rel=1e-12)

    def test_method_failures_recorded_not_raised(self):
        # ham is undefined for vanderpol: the row notes it, the run continues
        rows = build_comparison("vanderpol", (1.0,), ("ham", "fit"))
        assert rows[0].a_ham is None
        assert rows[0].a_irgm is not None
        assert "ham" in rows[0].error
