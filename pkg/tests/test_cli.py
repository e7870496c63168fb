import json
import math

import pytest

from squint.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBasicCommands:
    def test_crb_csv_to_stdout(self, capsys):
        code, out, _ = run(
            ["crb", "--n-bar", "100", "--e-minus-r", "0.2", "--purity", "0.5", "--bin-a", "0.5"],
            capsys,
        )
        assert code == 0
        lines = [l for l in out.strip().split("\n") if not l.startswith("#")]
        header = lines[0].split(",")
        values = lines[1].split(",")
        row = dict(zip(header, values))
        assert float(row["snl"]) == pytest.approx(0.1)
        assert float(row["crb_min_approx"]) == pytest.approx(0.02)

    def test_fwhm_json(self, capsys):
        code, out, _ = run(
            [
                "fwhm", "--alpha0", "20.6639", "--sinh2r", "0.687", "--purity", "0.58",
                "--bin-a", "0.1", "--format", "json",
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        gain = payload["rows"][0][payload["columns"].index("resolution_gain")]
        assert gain == pytest.approx(38.0, abs=4.0)

    def test_probs_with_negative_grid_bound(self, capsys):
        code, out, _ = run(
            ["probs", "--n-bar", "200", "--sinh2r", "0.7", "--bin-a", "0.1",
             "--theta-grid=-0.2:0.2:5"],
            capsys,
        )
        assert code == 0
        assert out.count("\n") == 7  # metadata + header + 5 rows

    def test_scan_theta_divergence_serializes_as_inf(self, capsys):
        code, out, _ = run(
            ["scan", "--n-bar", "200", "--sinh2r", "0.7", "--bin-a", "0.1",
             "--theta-grid=-0.1:0.1:3"],
            capsys,
        )
        assert code == 0
        center = [l for l in out.strip().split("\n") if l.startswith("0,")][0]
        assert ",inf," in center


class TestExitCodes:
    def test_config_error_is_2(self, capsys):
        code, _, err = run(["crb", "--n-bar", "1", "--sinh2r", "5"], capsys)
        assert code == 2
        assert "error" in err

    def test_numerical_failure_is_3(self, capsys):
        # flat signal never crosses half maximum
        code, _, err = run(["fwhm", "--alpha0", "0", "--r", "0", "--bin-a", "0.4"], capsys)
        assert code == 3
        assert "fringe-resolution" in err

    def test_both_grid_families_is_2(self, capsys):
        code, _, _ = run(
            ["scan", "--n-bar", "100", "--sinh2r", "0.7", "--theta-grid", "0:1:5",
             "--bin-a-grid", "0.1:0.5:3", "--e-minus-r-grid", "0.3:0.9:3"],
            capsys,
        )
        assert code == 2

    def test_plot_without_out_is_2(self, capsys):
        code, _, err = run(
            ["probs", "--alpha0", "2", "--r", "0.1", "--theta", "0.1", "--plot"], capsys
        )
        assert code == 2
        assert "--plot requires --out" in err


class TestConfigFile:
    def test_file_supplies_defaults_and_flags_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# fringe study\n"
            "n-bar = 200\n"
            "sinh2r = 0.7\n"
            "bin-a = 0.1\n"
            "theta = 0.05\n"
        )
        code, out, _ = run(["probs", "--config", str(cfg)], capsys)
        assert code == 0
        assert '"n_bar": 200.0' in out.split("\n")[0]

        code, out, _ = run(["probs", "--config", str(cfg), "--bin-a", "0.5"], capsys)
        assert code == 0
        assert '"bin_a": 0.5' in out.split("\n")[0]

    def test_unknown_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frobnicate = 3\n")
        code, _, err = run(["probs", "--config", str(cfg)], capsys)
        assert code == 2
        assert "frobnicate" in err

    def test_missing_file_rejected(self, tmp_path, capsys):
        code, _, _ = run(["probs", "--config", str(tmp_path / "nope.cfg")], capsys)
        assert code == 2


class TestOutputFiles:
    def test_single_table_to_file(self, tmp_path, capsys):
        out = tmp_path / "crb.csv"
        code, _, _ = run(
            ["crb", "--alpha0", "3", "--r", "0.2", "--out", str(out)], capsys
        )
        assert code == 0
        text = out.read_text()
        assert text.startswith("#")
        assert "crb_min" in text

    def test_simulate_writes_two_tables(self, tmp_path, capsys):
        out_dir = tmp_path / "sim"
        code, _, _ = run(
            [
                "simulate", "--alpha0", "6.48", "--sinh2r", "0.687", "--purity", "0.58",
                "--bin-a", "0.1", "--theta", "0.1", "--shots", "200", "--replicas", "4",
                "--seed", "9", "--out", str(out_dir),
            ],
            capsys,
        )
        assert code == 0
        assert (out_dir / "counts.csv").exists()
        assert (out_dir / "frequencies.csv").exists()

    def test_reproduce_fig1_with_plots(self, tmp_path, capsys):
        out_dir = tmp_path / "fig1"
        code, _, _ = run(
            [
                "reproduce", "fig1", "--theta-grid=-3.141592653589793:3.141592653589793:41",
                "--p-grid=-6:6:31", "--out", str(out_dir), "--plot",
            ],
            capsys,
        )
        assert code == 0
        for stem in ("fig1_pdf", "fig1_probs", "fig1_sensitivity"):
            assert (out_dir / f"{stem}.csv").exists()
            assert (out_dir / f"{stem}.png").stat().st_size > 0

    def test_reproduce_override_does_not_clobber_preset(self, tmp_path, capsys):
        out_dir = tmp_path / "fig4"
        code, _, _ = run(
            [
                "reproduce", "fig4", "--replicas", "5", "--shots", "100",
                "--theta-grid=-0.1:0.1:3", "--seed", "5", "--format", "json",
                "--out", str(out_dir),
            ],
            capsys,
        )
        assert code == 0
        payload = json.loads((out_dir / "fig4_replicas.json").read_text())
        config = payload["metadata"]["config"]
        assert config["purity"] == 0.58  # preset survived the partial override
        assert config["replicas"] == 5

    def test_json_stdout_is_parseable(self, capsys):
        code, out, _ = run(
            ["probs", "--alpha0", "2", "--r", "0.1", "--theta", "0.3", "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["name"] == "probs"


class TestFitCommand:
    def test_fit_recovers_exponent(self, tmp_path, capsys):
        data = tmp_path / "series.csv"
        lines = ["n_bar,value"]
        for n in (50, 100, 200, 400, 800):
            lines.append(f"{n},{2.5 * n ** -0.54:.15g}")
        data.write_text("\n".join(lines) + "\n")
        code, out, _ = run(
            ["fit", "--in", str(data), "--x-col", "n_bar", "--y-col", "value"], capsys
        )
        assert code == 0
        row = [l for l in out.strip().split("\n") if not l.startswith("#")][1].split(",")
        assert float(row[2]) == pytest.approx(2.5, rel=1e-6)
        assert float(row[3]) == pytest.approx(0.54, abs=1e-9)

    def test_fit_skips_comment_metadata(self, tmp_path, capsys):
        data = tmp_path / "series.csv"
        data.write_text(
            '# {"tool": "squint"}\nx,y\n10,1.0\n20,0.5\n40,0.25\n'
        )
        code, out, _ = run(["fit", "--in", str(data), "--x-col", "x", "--y-col", "y"], capsys)
        assert code == 0
        assert "power_law_fit" not in out.split("\n")[1]  # header line is columns

    def test_fit_unknown_column_is_2(self, tmp_path, capsys):
        data = tmp_path / "series.csv"
        data.write_text("x,y\n1,1\n2,2\n3,3\n")
        code, _, _ = run(["fit", "--in", str(data), "--x-col", "nope", "--y-col", "y"], capsys)
        assert code == 2


class TestEstimateCommand:
    def test_estimate_summary(self, tmp_path, capsys):
        code, out, _ = run(
            [
                "estimate", "--alpha0", "6.4807", "--sinh2r", "0.687", "--purity", "0.58",
                "--bin-a", "0.1", "--theta", "0.1", "--shots", "400", "--replicas", "5",
                "--seed", "1", "--estimator", "mle",
            ],
            capsys,
        )
        assert code == 0
        assert "estimate_summary" not in out  # table name only in metadata, not rows
        summary_lines = [l for l in out.strip().split("\n") if l.startswith("mle,")]
        assert len(summary_lines) == 1
        mean_estimate = float(summary_lines[0].split(",")[2])
        assert mean_estimate == pytest.approx(0.1, abs=0.05)
