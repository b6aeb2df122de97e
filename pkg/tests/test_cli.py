"""CLI surface: subcommands, exit codes, determinism of emitted artifacts."""

import json

import pytest

from aoci.cli import main
from aoci.figures import load_preset, preset_path


@pytest.fixture()
def config_path(baseline_doc, tmp_path):
    path = tmp_path / "link.json"
    path.write_text(json.dumps(baseline_doc))
    return str(path)


class TestEval:
    def test_quadrature_report(self, config_path, capsys):
        code = main(["eval", "--config", config_path, "--method", "quadrature",
                     "--samples", "10000"])
        out = capsys.readouterr().out
        assert code == 0
        assert "method    = quadrature" in out
        assert "p_hearing" in out and "dynamic range" in out
        assert "path gain h_l" in out

    def test_rerun_bit_identical(self, config_path, capsys):
        main(["eval", "--config", config_path, "--samples", "10000", "--seed", "42"])
        first = capsys.readouterr().out
        main(["eval", "--config", config_path, "--samples", "10000", "--seed", "42"])
        second = capsys.readouterr().out
        assert first == second

    def test_mc_method_reports_seed(self, config_path, capsys):
        code = main(["eval", "--config", config_path, "--method", "mc",
                     "--samples", "10000", "--seed", "7"])
        out = capsys.readouterr().out
        assert code == 0
        assert "monte_carlo" in out and "seed = 7" in out

    def test_series_strict_exits_3_on_hard_config(self, baseline_doc, tmp_path, capsys):
        baseline_doc["beam"]["sigma_s_mm"] = 30.0  # defeats the series route
        path = tmp_path / "hard.json"
        path.write_text(json.dumps(baseline_doc))
        code = main(["eval", "--config", str(path), "--method", "series",
                     "--strict", "--samples", "10000"])
        assert code == 3
        assert "fallback" in capsys.readouterr().err

    def test_series_nonstrict_falls_back_with_note(self, baseline_doc, tmp_path, capsys):
        baseline_doc["beam"]["sigma_s_mm"] = 30.0
        path = tmp_path / "hard.json"
        path.write_text(json.dumps(baseline_doc))
        code = main(["eval", "--config", str(path), "--method", "series",
                     "--samples", "10000"])
        out = capsys.readouterr().out
        assert code == 0
        assert "fell back" in out and "quadrature" in out

    def test_bad_config_exits_2(self, baseline_doc, tmp_path, capsys):
        baseline_doc["beam"]["sigma_s_mm"] = -1.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(baseline_doc))
        code = main(["eval", "--config", str(path)])
        assert code == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_file_exits_2(self, capsys):
        assert main(["eval", "--config", "/nonexistent/link.json"]) == 2

    def test_eval_csv_written_and_deterministic(self, config_path, tmp_path, capsys):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["eval", "--config", config_path, "--samples", "10000",
              "--seed", "5", "--out", str(out_a)])
        main(["eval", "--config", config_path, "--samples", "10000",
              "--seed", "5", "--out", str(out_b)])
        capsys.readouterr()
        a = (out_a / "eval.csv").read_bytes()
        b = (out_b / "eval.csv").read_bytes()
        assert a == b
        assert b"config_hash" in a


class TestSweep:
    def make_sweep(self, tmp_path, **overrides):
        doc = {
            "axis1": {"path": "beam.sigma_s_mm", "values": [0.05, 0.1, 0.2]},
            "metric": "mean_flux",
            "method": "quadrature",
        }
        doc.update(overrides)
        path = tmp_path / "sweep.json"
        path.write_text(json.dumps(doc))
        return str(path)

    def test_sweep_writes_csv(self, config_path, tmp_path, capsys):
        sweep_path = self.make_sweep(tmp_path)
        out_dir = tmp_path / "out"
        code = main(["sweep", "--config", config_path, "--sweep", sweep_path,
                     "--out", str(out_dir)])
        assert code == 0
        assert (out_dir / "sweep.csv").exists()

    def test_sweep_svg_one_axis(self, config_path, tmp_path, capsys):
        sweep_path = self.make_sweep(tmp_path)
        out_dir = tmp_path / "out"
        code = main(["sweep", "--config", config_path, "--sweep", sweep_path,
                     "--out", str(out_dir), "--svg"])
        assert code == 0
        svg = (out_dir / "sweep.svg").read_text()
        assert svg.startswith("<?xml") and "<polyline" in svg

    def test_sweep_svg_two_axis_heatmap(self, config_path, tmp_path, capsys):
        sweep_path = self.make_sweep(
            tmp_path, axis2={"path": "skin.delta_mm", "values": [4.0, 6.0]}
        )
        out_dir = tmp_path / "out"
        code = main(["sweep", "--config", config_path, "--sweep", sweep_path,
                     "--out", str(out_dir), "--svg"])
        assert code == 0
        assert "<rect" in (out_dir / "sweep.svg").read_text()

    def test_sweep_csv_bytes_reproducible(self, config_path, tmp_path, capsys):
        sweep_path = self.make_sweep(
            tmp_path, metric="p_hearing", method="mc", mc={"n": 10000, "seed": 9}
        )
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["sweep", "--config", config_path, "--sweep", sweep_path, "--out", str(out_a)])
        main(["sweep", "--config", config_path, "--sweep", sweep_path, "--out", str(out_b)])
        assert (out_a / "sweep.csv").read_bytes() == (out_b / "sweep.csv").read_bytes()

    def test_bad_sweep_spec_exits_2(self, config_path, tmp_path, capsys):
        sweep_path = self.make_sweep(tmp_path, axis1={"path": "beam.sigma_s_mm", "values": []})
        assert main(["sweep", "--config", config_path, "--sweep", sweep_path,
                     "--out", str(tmp_path / "out")]) == 2


class TestFigure:
    def test_figure6_produces_artifacts_and_passes(self, tmp_path, capsys):
        code = main(["figure", "6", "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert code == 0
        assert (tmp_path / "fig6.csv").exists()
        assert (tmp_path / "fig6.svg").exists()
        assert "PASS" in out and "FAIL" not in out

    def test_figure_accepts_config_override(self, tmp_path, capsys):
        preset = load_preset("fig6")
        override = preset.with_value("source.power_mw", 25.0)
        path = tmp_path / "override.json"
        path.write_text(override.to_json())
        code = main(["figure", "6", "--config", str(path), "--out", str(tmp_path)])
        assert code == 0

    def test_presets_ship_with_calibration_notes(self):
        for n in (3, 4, 5, 6, 7, 8):
            assert preset_path(f"fig{n}.json").exists()
            note = preset_path(f"fig{n}.calibration.md").read_text()
            assert "grid" in note.lower()
        assert preset_path("default.calibration.md").exists()


class TestValidate:
    def test_quick_validation_passes(self, capsys):
        code = main(["validate", "--quick"])
        out = capsys.readouterr().out
        assert code == 0
        assert "validation passed" in out
        assert out.count("PASS") == 6

    def test_injected_perturbation_fails(self, capsys, monkeypatch):
        monkeypatch.setenv("AOCI_VALIDATE_PERTURB", "1")
        code = main(["validate", "--quick"])
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out
