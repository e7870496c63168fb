import json
import math

import numpy as np
import pytest

from squint import ConfigError, ExperimentConfig, PhaseSensitivity, fit_power_law, reproduce, scan
from squint.sweeps import (
    SweepTable,
    ab_grid_scan,
    crb_table,
    estimate_tables,
    fwhm_table,
    parse_grid,
    pdf_table,
    probs_table,
    simulate_tables,
    theta_scan,
)


class TestFitPowerLaw:
    def test_exact_square_root_law(self):
        x = np.linspace(50.0, 1000.0, 20)
        fit = fit_power_law(zip(x, 2.0 * x**-0.5))
        assert fit.prefactor == pytest.approx(2.0, abs=1e-10)
        assert fit.exponent == pytest.approx(0.5, abs=1e-10)
        assert fit.residual_rms == pytest.approx(0.0, abs=1e-12)

    def test_requires_three_positive_points(self):
        with pytest.raises(ConfigError):
            fit_power_law([(1.0, 1.0), (2.0, 0.5)])
        with pytest.raises(ConfigError):
            fit_power_law([(1.0, 1.0), (2.0, -0.5), (3.0, 0.2)])


class TestParseGrid:
    def test_accepts_string_and_sequence(self):
        assert parse_grid("0:1:5") == (0.0, 1.0, 5)
        assert parse_grid([-0.4, 0.4, 11]) == (-0.4, 0.4, 11)

    @pytest.mark.parametrize("bad", ["0:1", "a:b:c", "1:0:5", [1, 2], [0, 1, 1]])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ConfigError):
            parse_grid(bad)


class TestExperimentConfig:
    def test_round_trips_through_dict(self):
        config = ExperimentConfig(
            n_bar=200.0, sinh2r=0.7, bin_a=0.1, theta_grid=(-1.0, 1.0, 21), seed=3
        )
        assert ExperimentConfig.from_dict(config.to_dict()) == config

    def test_rejects_unknown_keys(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"not_a_field": 1})


class TestScan:
    def test_requires_exactly_one_grid_family(self):
        with pytest.raises(ConfigError):
            scan(ExperimentConfig(n_bar=100.0, sinh2r=0.7))
        with pytest.raises(ConfigError):
            scan(
                ExperimentConfig(
                    n_bar=100.0,
                    sinh2r=0.7,
                    theta_grid=(-1, 1, 5),
                    bin_a_grid=(0.1, 0.5, 3),
                    e_minus_r_grid=(0.2, 0.8, 3),
                )
            )

    def test_theta_scan_divergence_column(self):
        config = ExperimentConfig(
            n_bar=200.0, sinh2r=0.7, purity=1.0, bin_a=0.1, theta_grid=(-0.5, 0.5, 11)
        )
        table = theta_scan(config)
        center = table.rows[5]
        names = table.columns
        assert center[names.index("theta")] == 0.0
        delta_bin = center[names.index("delta_bin")]
        assert isinstance(delta_bin, PhaseSensitivity) and delta_bin.divergent
        delta_mul = center[names.index("delta_mul")]
        assert float(delta_mul) < center[names.index("snl")]

    def test_probabilities_lie_in_unit_interval(self):
        config = ExperimentConfig(
            n_bar=100.0, e_minus_r=0.4, purity=0.6, bin_a=0.3, theta_grid=(-3.1, 3.1, 41)
        )
        table = theta_scan(config)
        for name in ("p_minus", "p_zero", "p_plus"):
            column = np.array(table.column(name))
            assert np.all((column >= 0.0) & (column <= 1.0))

    def test_ab_grid_requires_budget(self):
        with pytest.raises(ConfigError):
            ab_grid_scan(
                ExperimentConfig(
                    alpha0=3.0, r=0.1, bin_a_grid=(0.1, 0.5, 3), e_minus_r_grid=(0.3, 0.9, 3)
                )
            )

    def test_fwhm_monotone_in_bin_width(self):
        config = ExperimentConfig(
            n_bar=100.0,
            purity=0.5,
            bin_a_grid=(0.1, 0.9, 5),
            e_minus_r_grid=(0.4, 0.8, 2),
        )
        table = ab_grid_scan(config)
        a = np.array(table.column("bin_a"))
        em = np.array(table.column("e_minus_r"))
        width = np.array(table.column("fwhm"))
        for setting in np.unique(em):
            mask = em == setting
            order = np.argsort(a[mask])
            assert np.all(np.diff(width[mask][order]) >= -1e-12)

    def test_sensitivities_positive_or_flagged(self):
        config = ExperimentConfig(
            n_bar=100.0, purity=0.5, bin_a_grid=(0.2, 0.6, 3), e_minus_r_grid=(0.3, 0.9, 3)
        )
        table = ab_grid_scan(config)
        for name in ("delta_bin_min", "delta_mul_min"):
            for cell in table.column(name):
                if isinstance(cell, PhaseSensitivity):
                    assert cell.divergent and cell.reason
                else:
                    assert float(cell) > 0.0


class TestDeterminismAndRoundTrip:
    def test_scan_rerun_from_metadata_is_identical(self):
        config = ExperimentConfig(
            n_bar=150.0, sinh2r=0.5, purity=0.9, bin_a=0.2, theta_grid=(-1.0, 1.0, 31)
        )
        first = scan(config)
        rebuilt = ExperimentConfig.from_dict(first.metadata["config"])
        second = scan(rebuilt)
        assert first.rows == second.rows
        assert first.metadata["config_hash"] == second.metadata["config_hash"]

    def test_monte_carlo_preset_is_seed_deterministic(self):
        overrides = {"replicas": 8, "shots": 200, "theta_grid": (-0.1, 0.1, 3), "seed": 11}
        first = reproduce("fig4", overrides)[0]
        second = reproduce("fig4", overrides)[0]
        assert first.rows == second.rows
        third = reproduce("fig4", {**overrides, "seed": 12})[0]
        assert third.rows != first.rows

    def test_unknown_preset_rejected(self):
        with pytest.raises(ConfigError):
            reproduce("fig9")


class TestSerialization:
    def _divergent_table(self):
        return SweepTable(
            "demo",
            ["x", "delta"],
            [(0.0, PhaseSensitivity(math.inf, divergent=True, reason="stationary-signal")),
             (1.0, 0.25)],
            {"tool": "squint"},
        )

    def test_csv_has_one_header_line_and_inf_cells(self):
        text = self._divergent_table().to_csv()
        lines = text.strip().split("\n")
        comments = [l for l in lines if l.startswith("#")]
        headers = [l for l in lines if not l.startswith("#")][0]
        assert len(comments) == 1
        assert headers == "x,delta"
        assert lines[2].endswith(",inf")

    def test_json_divergence_is_null_with_reason(self):
        obj = self._divergent_table().to_json_obj()
        assert obj["schema_version"] == 1
        assert obj["rows"][0][1] == {"value": None, "reason": "stationary-signal"}
        assert obj["rows"][1][1] == 0.25
        json.dumps(obj)  # must be serializable as-is

    def test_row_width_is_validated(self):
        with pytest.raises(ConfigError):
            SweepTable("bad", ["a", "b"], [(1.0,)])


class TestSingleCommandTables:
    def test_pdf_requires_grids(self):
        with pytest.raises(ConfigError):
            pdf_table(ExperimentConfig(alpha0=1.0, r=0.2))

    def test_pdf_rows(self):
        config = ExperimentConfig(alpha0=1.0, r=0.2, theta=0.0, p_grid=(-2.0, 2.0, 5))
        table = pdf_table(config)
        assert table.columns == ["theta", "p", "density"]
        assert len(table.rows) == 5

    def test_probs_needs_some_theta(self):
        with pytest.raises(ConfigError):
            probs_table(ExperimentConfig(alpha0=1.0, r=0.2))

    def test_crb_and_fwhm_tables(self):
        config = ExperimentConfig(n_bar=427.687, sinh2r=0.687, purity=0.58, bin_a=0.1)
        crb = crb_table(config)
        assert len(crb.rows) == 1
        fwhm = fwhm_table(config)
        gain = fwhm.rows[0][fwhm.columns.index("resolution_gain")]
        assert gain == pytest.approx(38.0, abs=4.0)

    def test_simulate_and_estimate_tables(self):
        config = ExperimentConfig(
            alpha0=math.sqrt(42.0), sinh2r=0.687, purity=0.58, bin_a=0.1,
            theta=0.1, shots=300, replicas=6, seed=2,
        )
        counts, freqs = simulate_tables(config)
        assert len(counts.rows) == 6
        total = sum(counts.rows[0][1:4])
        assert total == 300
        assert freqs.columns[0] == "outcome"

        estimates, summary = estimate_tables(config, "both")
        assert len(estimates.rows) == 12  # both estimators, 6 replicas each
        assert {row[0] for row in summary.rows} == {"mle", "composite"}

    def test_estimate_rejects_unknown_estimator(self):
        config = ExperimentConfig(alpha0=2.0, r=0.3, theta=0.1, shots=100, replicas=4)
        with pytest.raises(ConfigError):
            estimate_tables(config, "bayes")
