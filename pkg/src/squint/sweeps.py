"""Parameter sweeps, preset studies, and delimited-table emission.

A SweepTable is the single output currency of the command-line layer:
a named column schema, rows of plain numbers (plus explicit divergence
sentinels), and provenance metadata (tool version, seed, the full
flat configuration and its hash). Re-running the configuration stored
in a table's metadata reproduces the table exactly.

Four preset studies ("fig1" .. "fig4") bundle the parameter sets used
throughout the package documentation: fringe probabilities and
sensitivities at n_bar = 200; resolution/sensitivity maps over the
(bin width, squeeze factor) plane at n_bar = 100; scaling of the best
sensitivity and of the fringe width over n_bar in [50, 1000]; and the
Monte Carlo estimator benchmark at n_bar ~ 42.7 with M = 100 replicas
of N = 1000 shots.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Iterable

import numpy as np

from . import __version__
from .binning import (
    BinningScheme,
    PhaseSensitivity,
    best_binary_sensitivity,
    binary_cfi,
    center_bin_fwhm,
    improvement_db,
    multi_cfi,
    outcome_derivs,
    outcome_probs,
    per_outcome_cfi,
    scaled_signal,
)
from .errors import ConfigError
from .estimation import composite_estimate, evaluate_replicas, mle
from .model import (
    InputState,
    continuous_cfi,
    crb_min,
    crb_min_approx,
    derive_params,
    input_state,
    quadrature_pdf,
)
from .sampler import empirical_stats, run_replicas

RAYLEIGH_FWHM = 2.0 * math.pi / 3.0
SCHEMA_VERSION = 1
FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4")

GridSpec = tuple[float, float, int]


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment description mirroring the CLI flags."""

    alpha0: float | None = None
    n_bar: float | None = None
    r: float | None = None
    e_minus_r: float | None = None
    sinh2r: float | None = None
    purity: float = 1.0
    bin_a: float = 0.1
    theta: float | None = None
    theta_grid: GridSpec | None = None
    p_grid: GridSpec | None = None
    bin_a_grid: GridSpec | None = None
    e_minus_r_grid: GridSpec | None = None
    shots: int = 1000
    replicas: int = 100
    seed: int = 0

    def state(self) -> InputState:
        return input_state(
            alpha0=self.alpha0,
            n_bar=self.n_bar,
            r=self.r,
            e_minus_r=self.e_minus_r,
            sinh2r=self.sinh2r,
            purity=self.purity,
        )

    def scheme(self) -> BinningScheme:
        return BinningScheme(self.bin_a)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for key in (
            "alpha0", "n_bar", "r", "e_minus_r", "sinh2r", "purity", "bin_a",
            "theta", "theta_grid", "p_grid", "bin_a_grid", "e_minus_r_grid",
            "shots", "replicas", "seed",
        ):
            value = getattr(self, key)
            if value is None:
                continue
            out[key] = list(value) if isinstance(value, tuple) else value
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            if key.endswith("_grid") and value is not None:
                value = parse_grid(value)
            kwargs[key] = value
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"unknown configuration key: {exc}") from exc


def parse_grid(spec: Any) -> GridSpec:
    """Accept 'lo:hi:count' strings or [lo, hi, count] sequences."""
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid spec must be lo:hi:count, got {spec!r}")
        lo_s, hi_s, count_s = parts
        try:
            lo, hi, count = float(lo_s), float(hi_s), int(count_s)
        except ValueError as exc:
            raise ConfigError(f"bad grid spec {spec!r}: {exc}") from exc
    else:
        seq = list(spec)
        if len(seq) != 3:
            raise ConfigError(f"grid spec must have 3 entries, got {spec!r}")
        lo, hi, count = float(seq[0]), float(seq[1]), int(seq[2])
    if count < 2:
        raise ConfigError(f"grid needs at least 2 points, got {count}")
    if not (hi > lo):
        raise ConfigError(f"grid upper bound must exceed lower bound, got {spec!r}")
    return lo, hi, count


def grid_points(spec: GridSpec) -> np.ndarray:
    lo, hi, count = spec
    return np.linspace(lo, hi, count)


@dataclass
class SweepTable:
    """Named rows of numbers with provenance metadata.

    Cells may be int, float, str, or PhaseSensitivity; divergent
    sensitivities serialize as "inf" in CSV and as a null-with-reason
    object in JSON.
    """

    name: str
    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ConfigError(
                    f"table {self.name!r}: row width {len(row)} != {len(self.columns)} columns"
                )

    def write_csv(self, fh: io.TextIOBase) -> None:
        fh.write(f"# {json.dumps(self.metadata, sort_keys=True)}\n")
        fh.write(",".join(self.columns) + "\n")
        for row in self.rows:
            fh.write(",".join(_csv_cell(cell) for cell in row) + "\n")

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "metadata": self.metadata,
            "columns": list(self.columns),
            "rows": [[_json_cell(cell) for cell in row] for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _csv_cell(cell) -> str:
    if isinstance(cell, PhaseSensitivity):
        return "inf" if cell.divergent else _csv_cell(cell.value)
    if isinstance(cell, str):
        return cell
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    value = float(cell)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return format(value, ".12g")


def _json_cell(cell):
    if isinstance(cell, PhaseSensitivity):
        if cell.divergent:
            return {"value": None, "reason": cell.reason}
        return cell.value
    if isinstance(cell, (int, np.integer)):
        return int(cell)
    if isinstance(cell, str):
        return cell
    value = float(cell)
    if math.isinf(value) or math.isnan(value):
        return {"value": None, "reason": "non-finite"}
    return value


def table_metadata(command: str, config: ExperimentConfig) -> dict[str, Any]:
    config_dict = config.to_dict()
    digest = hashlib.sha256(
        json.dumps(config_dict, sort_keys=True).encode()
    ).hexdigest()[:12]
    return {
        "tool": "squint",
        "version": __version__,
        "command": command,
        "seed": config.seed,
        "config": config_dict,
        "config_hash": digest,
    }


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of value = prefactor * x^(-exponent) in log-log."""

    prefactor: float
    exponent: float
    residual_rms: float


def fit_power_law(points: Iterable[tuple[float, float]]) -> PowerLawFit:
    """Fit value = c * x^(-q) by linear least squares on (ln x, ln value)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 3:
        raise ConfigError(f"power-law fit needs at least 3 points, got {len(pts)}")
    if any(x <= 0.0 or y <= 0.0 for x, y in pts):
        raise ConfigError("power-law fit requires strictly positive coordinates")
    log_x = np.log([x for x, _ in pts])
    log_y = np.log([y for _, y in pts])
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residuals = log_y - (slope * log_x + intercept)
    return PowerLawFit(
        prefactor=float(np.exp(intercept)),
        exponent=float(-slope),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
    )


def _delta_or_sentinel(fisher: float) -> float | PhaseSensitivity:
    if fisher > 0.0:
        return 1.0 / math.sqrt(fisher)
    return PhaseSensitivity(math.inf, divergent=True, reason="zero-information")


def theta_scan(config: ExperimentConfig) -> SweepTable:
    """Fringe-resolved quantities over the theta grid."""
    if config.theta_grid is None:
        raise ConfigError("theta scan requires a theta grid")
    params = derive_params(config.state())
    scheme = config.scheme()
    thetas = grid_points(config.theta_grid)
    probs = outcome_probs(params, scheme, thetas)
    signal = scaled_signal(params, scheme, thetas)
    f_bin = np.asarray(binary_cfi(params, scheme, thetas))
    f_mul = np.asarray(multi_cfi(params, scheme, thetas))
    f_cont = np.asarray(continuous_cfi(params, thetas))
    snl = 1.0 / math.sqrt(params.n_bar)
    rows = []
    for i, theta in enumerate(thetas):
        rows.append(
            (
                float(theta),
                float(probs.p_minus[i]),
                float(probs.p_zero[i]),
                float(probs.p_plus[i]),
                float(signal[i]),
                float(f_bin[i]),
                float(f_mul[i]),
                float(f_cont[i]),
                _delta_or_sentinel(float(f_bin[i])),
                _delta_or_sentinel(float(f_mul[i])),
                snl,
            )
        )
    return SweepTable(
        name="theta_scan",
        columns=[
            "theta", "p_minus", "p_zero", "p_plus", "scaled_signal",
            "f_bin", "f_mul", "f_continuous", "delta_bin", "delta_mul", "snl",
        ],
        rows=rows,
        metadata=table_metadata("scan", config),
    )


def ab_grid_scan(config: ExperimentConfig) -> SweepTable:
    """Resolution and sensitivity maps over the (bin width, e^-r) plane.

    Requires n_bar and purity; the coherent amplitude absorbs the
    photon budget left by each squeeze setting.
    """
    if config.bin_a_grid is None or config.e_minus_r_grid is None:
        raise ConfigError("grid scan requires both bin_a and e_minus_r grids")
    if config.n_bar is None:
        raise ConfigError("grid scan requires n_bar (the photon budget is held fixed)")
    rows = []
    for em in grid_points(config.e_minus_r_grid):
        state = input_state(n_bar=config.n_bar, e_minus_r=float(em), purity=config.purity)
        params = derive_params(state)
        for a in grid_points(config.bin_a_grid):
            scheme = BinningScheme(float(a))
            fwhm = center_bin_fwhm(params, scheme)
            theta_min, delta_bin_min = best_binary_sensitivity(params, scheme)
            f0 = float(multi_cfi(params, scheme, 0.0))
            delta_mul_min = _delta_or_sentinel(f0)
            if isinstance(delta_mul_min, PhaseSensitivity):
                db_mul = math.nan
                scaling = math.nan
            else:
                db_mul = improvement_db(delta_mul_min, params.n_bar)
                scaling = -math.log(delta_mul_min) / math.log(params.n_bar)
            rows.append(
                (
                    float(a),
                    float(em),
                    params.alpha0**2,
                    fwhm,
                    RAYLEIGH_FWHM / fwhm,
                    delta_bin_min,
                    theta_min,
                    improvement_db(delta_bin_min, params.n_bar),
                    delta_mul_min,
                    db_mul,
                    scaling,
                )
            )
    return SweepTable(
        name="ab_grid_scan",
        columns=[
            "bin_a", "e_minus_r", "alpha0_sq", "fwhm", "resolution_gain",
            "delta_bin_min", "theta_min_bin", "db_bin",
            "delta_mul_min", "db_mul", "scaling",
        ],
        rows=rows,
        metadata=table_metadata("scan", config),
    )


def scan(config: ExperimentConfig) -> SweepTable:
    """Dispatch to the theta scan or the (bin width, squeeze) grid scan."""
    has_theta = config.theta_grid is not None
    has_ab = config.bin_a_grid is not None or config.e_minus_r_grid is not None
    if has_theta and has_ab:
        raise ConfigError("give either a theta grid or an (bin_a, e_minus_r) grid, not both")
    if has_theta:
        return theta_scan(config)
    if has_ab:
        return ab_grid_scan(config)
    raise ConfigError("scan requires --theta-grid or both --bin-a-grid and --e-minus-r-grid")


# ---------------------------------------------------------------------------
# preset studies


def _fig1_config(overrides: dict) -> ExperimentConfig:
    base = ExperimentConfig(
        n_bar=200.0,
        sinh2r=0.7,
        purity=1.0,
        bin_a=0.1,
        theta_grid=(-math.pi, math.pi, 721),
        p_grid=(-8.0, 8.0, 161),
    )
    return replace(base, **overrides)


def _fig2_config(overrides: dict) -> ExperimentConfig:
    base = ExperimentConfig(
        n_bar=100.0,
        purity=0.5,
        bin_a_grid=(0.02, 1.0, 61),
        e_minus_r_grid=(0.1, 1.0, 61),
    )
    return replace(base, **overrides)


def _fig3_config(overrides: dict) -> ExperimentConfig:
    # the n_bar ladder (12 log-spaced points in [50, 1000]) is fixed by the study
    base = ExperimentConfig(sinh2r=0.687, purity=0.58)
    return replace(base, **overrides)


def _fig4_config(overrides: dict) -> ExperimentConfig:
    base = ExperimentConfig(
        alpha0=math.sqrt(42.0),
        sinh2r=0.687,
        purity=0.58,
        bin_a=0.1,
        shots=1000,
        replicas=100,
        theta_grid=(-0.24, 0.24, 13),
        seed=0,
    )
    return replace(base, **overrides)


def reproduce(figure_id: str, overrides: dict | None = None) -> list[SweepTable]:
    """Emit the data tables behind one preset study."""
    overrides = dict(overrides or {})
    if figure_id == "fig1":
        return _reproduce_fig1(_fig1_config(overrides))
    if figure_id == "fig2":
        return _reproduce_fig2(_fig2_config(overrides))
    if figure_id == "fig3":
        return _reproduce_fig3(_fig3_config(overrides))
    if figure_id == "fig4":
        return _reproduce_fig4(_fig4_config(overrides))
    raise ConfigError(f"unknown preset {figure_id!r}; expected one of {FIGURE_IDS}")


def _reproduce_fig1(config: ExperimentConfig) -> list[SweepTable]:
    params = derive_params(config.state())
    scheme = config.scheme()
    meta = table_metadata("reproduce fig1", config)

    # density map on a coarser theta grid than the fringe curves
    assert config.theta_grid is not None and config.p_grid is not None
    lo, hi, _ = config.theta_grid
    thetas_2d = np.linspace(lo, hi, 241)
    p_values = grid_points(config.p_grid)
    pdf_rows = []
    for theta in thetas_2d:
        density = quadrature_pdf(params, float(theta), p_values)
        pdf_rows.extend(
            (float(theta), float(p), float(d)) for p, d in zip(p_values, density)
        )
    pdf_table = SweepTable("fig1_pdf", ["theta", "p", "density"], pdf_rows, dict(meta))

    probs_table = _fig1_probs_table(config, params, scheme, meta)
    sens_table = _fig1_sensitivity_table(config, params, scheme, meta)
    return [pdf_table, probs_table, sens_table]


def _fig1_probs_table(config, params, scheme, meta) -> SweepTable:
    thetas = grid_points(config.theta_grid)
    probs = outcome_probs(params, scheme, thetas)
    signal = scaled_signal(params, scheme, thetas)
    rows = [
        (
            float(t),
            float(probs.p_minus[i]),
            float(probs.p_zero[i]),
            float(probs.p_plus[i]),
            float(signal[i]),
        )
        for i, t in enumerate(thetas)
    ]
    return SweepTable(
        "fig1_probs",
        ["theta", "p_minus", "p_zero", "p_plus", "scaled_signal"],
        rows,
        dict(meta),
    )


def _fig1_sensitivity_table(config, params, scheme, meta) -> SweepTable:
    thetas = grid_points(config.theta_grid)
    f_bin = np.asarray(binary_cfi(params, scheme, thetas))
    f_mul = np.asarray(multi_cfi(params, scheme, thetas))
    snl = 1.0 / math.sqrt(params.n_bar)
    rows = [
        (
            float(t),
            _delta_or_sentinel(float(f_bin[i])),
            _delta_or_sentinel(float(f_mul[i])),
            snl,
        )
        for i, t in enumerate(thetas)
    ]
    meta = dict(meta)
    theta_min, delta_bin_min = best_binary_sensitivity(params, scheme)
    meta["fwhm"] = center_bin_fwhm(params, scheme)
    meta["theta_min_bin"] = theta_min
    meta["delta_bin_min"] = delta_bin_min
    return SweepTable(
        "fig1_sensitivity", ["theta", "delta_bin", "delta_mul", "snl"], rows, meta
    )


def _reproduce_fig2(config: ExperimentConfig) -> list[SweepTable]:
    table = ab_grid_scan(config)
    table.name = "fig2_grid"
    table.metadata = table_metadata("reproduce fig2", config)
    return [table]


def _reproduce_fig3(config: ExperimentConfig) -> list[SweepTable]:
    meta = table_metadata("reproduce fig3", config)
    n_bars = np.logspace(math.log10(50.0), math.log10(1000.0), 12)
    a_mul, a_bin = 0.1, 0.5
    rows = []
    for n_bar in n_bars:
        state = input_state(n_bar=float(n_bar), sinh2r=config.sinh2r, purity=config.purity)
        params = derive_params(state)
        f0 = float(multi_cfi(params, BinningScheme(a_mul), 0.0))
        _, delta_bin_min = best_binary_sensitivity(params, BinningScheme(a_bin))
        rows.append(
            (
                float(n_bar),
                1.0 / math.sqrt(f0),
                delta_bin_min,
                crb_min(params),
                crb_min_approx(params),
                1.0 / math.sqrt(float(n_bar)),
                center_bin_fwhm(params, BinningScheme(a_bin)),
                center_bin_fwhm(params, BinningScheme(a_mul)),
            )
        )
    scaling = SweepTable(
        "fig3_scaling",
        [
            "n_bar", "delta_mul_min", "delta_bin_min", "crb_min",
            "crb_min_approx", "snl", "fwhm_bin", "fwhm_mul",
        ],
        rows,
        meta,
    )
    fits = []
    for column in ("delta_mul_min", "delta_bin_min", "fwhm_bin", "fwhm_mul"):
        fit = fit_power_law(zip(scaling.column("n_bar"), scaling.column(column)))
        fits.append((column, fit.prefactor, fit.exponent, fit.residual_rms))
    fits_table = SweepTable(
        "fig3_fits", ["series", "prefactor", "exponent", "residual_rms"], fits, dict(meta)
    )
    return [scaling, fits_table]


def _reproduce_fig4(config: ExperimentConfig) -> list[SweepTable]:
    params = derive_params(config.state())
    scheme = config.scheme()
    meta = table_metadata("reproduce fig4", config)
    assert config.theta_grid is not None
    theta0s = grid_points(config.theta_grid)
    snl = 1.0 / math.sqrt(params.n_bar)
    sqrt_n = math.sqrt(config.shots)
    rows = []
    for idx, theta0 in enumerate(theta0s):
        replicas = run_replicas(
            params, scheme, float(theta0), config.shots, config.replicas,
            master_seed=config.seed + idx,
        )
        stats = empirical_stats(replicas)
        probs = outcome_probs(params, scheme, float(theta0))

        mle_results = [mle(rec, params, scheme) for rec in replicas.records]
        mle_estimates = [res.estimate for res in mle_results]
        sigmas = [res.sigma for res in mle_results if res.sigma is not None]
        sigma_mean = sqrt_n * float(np.mean(sigmas)) if sigmas else math.nan
        sigma_std = sqrt_n * float(np.std(sigmas, ddof=1)) if len(sigmas) >= 2 else math.nan
        mle_summary = evaluate_replicas(mle_estimates, float(theta0), config.shots)

        comp_results = [composite_estimate(rec, params, scheme) for rec in replicas.records]
        comp_estimates = [res.estimate for res in comp_results if res.failure is None]
        comp_failures = sum(1 for res in comp_results if res.failure is not None)
        comp_summary = evaluate_replicas(comp_estimates, float(theta0), config.shots)

        f_mul = float(multi_cfi(params, scheme, float(theta0)))
        f_bin = float(binary_cfi(params, scheme, float(theta0)))
        rows.append(
            (
                float(theta0),
                stats.mean_freq["-"], stats.std_freq["-"],
                stats.mean_freq["0"], stats.std_freq["0"],
                stats.mean_freq["+"], stats.std_freq["+"],
                float(probs.p_minus), float(probs.p_zero), float(probs.p_plus),
                sigma_mean,
                sigma_std,
                mle_summary.bias, mle_summary.std_dev, mle_summary.per_measurement,
                comp_summary.bias, comp_summary.std_dev, comp_summary.per_measurement,
                _delta_or_sentinel(f_mul),
                _delta_or_sentinel(f_bin),
                snl,
                len(mle_results) - len(sigmas),
                comp_failures,
            )
        )
    table = SweepTable(
        "fig4_replicas",
        [
            "theta0",
            "freq_minus_mean", "freq_minus_std",
            "freq_zero_mean", "freq_zero_std",
            "freq_plus_mean", "freq_plus_std",
            "prob_minus", "prob_zero", "prob_plus",
            "mle_sqrtn_sigma_mean", "mle_sqrtn_sigma_std",
            "mle_bias", "mle_std", "mle_sqrtn_rmse",
            "comp_bias", "comp_std", "comp_sqrtn_rmse",
            "delta_mul", "delta_bin", "snl",
            "mle_sigma_failures", "comp_failures",
        ],
        rows,
        meta,
    )
    return [table]


# ---------------------------------------------------------------------------
# single-shot tables for the simple CLI commands


def pdf_table(config: ExperimentConfig) -> SweepTable:
    params = derive_params(config.state())
    if config.p_grid is None:
        raise ConfigError("pdf requires --p-grid")
    p_values = grid_points(config.p_grid)
    if config.theta_grid is not None:
        thetas = grid_points(config.theta_grid)
    elif config.theta is not None:
        thetas = np.array([config.theta])
    else:
        raise ConfigError("pdf requires --theta or --theta-grid")
    rows = []
    for theta in thetas:
        density = quadrature_pdf(params, float(theta), p_values)
        rows.extend((float(theta), float(p), float(d)) for p, d in zip(p_values, density))
    return SweepTable(
        "pdf", ["theta", "p", "density"], rows, table_metadata("pdf", config)
    )


def probs_table(config: ExperimentConfig) -> SweepTable:
    params = derive_params(config.state())
    scheme = config.scheme()
    thetas = _theta_values(config)
    probs = outcome_probs(params, scheme, thetas)
    derivs = outcome_derivs(params, scheme, thetas)
    signal = scaled_signal(params, scheme, thetas)
    rows = [
        (
            float(t),
            float(np.asarray(probs.p_minus)[i]),
            float(np.asarray(probs.p_zero)[i]),
            float(np.asarray(probs.p_plus)[i]),
            float(np.asarray(derivs.dp_minus)[i]),
            float(np.asarray(derivs.dp_zero)[i]),
            float(np.asarray(derivs.dp_plus)[i]),
            float(np.asarray(signal)[i]),
        )
        for i, t in enumerate(thetas)
    ]
    return SweepTable(
        "probs",
        ["theta", "p_minus", "p_zero", "p_plus", "dp_minus", "dp_zero", "dp_plus", "scaled_signal"],
        rows,
        table_metadata("probs", config),
    )


def cfi_table(config: ExperimentConfig) -> SweepTable:
    params = derive_params(config.state())
    scheme = config.scheme()
    thetas = _theta_values(config)
    columns = ["theta", "f_minus", "f_zero", "f_plus", "f_mul", "f_bin", "f_continuous"]
    rows = []
    for theta in thetas:
        t = float(theta)
        f_k = {k: float(per_outcome_cfi(params, scheme, t, k)) for k in ("-", "0", "+")}
        rows.append(
            (
                t, f_k["-"], f_k["0"], f_k["+"],
                f_k["-"] + f_k["0"] + f_k["+"],
                float(binary_cfi(params, scheme, t)),
                float(continuous_cfi(params, t)),
            )
        )
    return SweepTable("cfi", columns, rows, table_metadata("cfi", config))


def crb_table(config: ExperimentConfig) -> SweepTable:
    params = derive_params(config.state())
    scheme = config.scheme()
    f0 = float(multi_cfi(params, scheme, 0.0))
    theta_min, delta_bin_min = best_binary_sensitivity(params, scheme)
    row = (
        params.alpha0,
        params.r,
        params.purity,
        params.n_bar,
        1.0 / math.sqrt(params.n_bar),
        crb_min(params),
        crb_min_approx(params),
        _delta_or_sentinel(f0),
        delta_bin_min,
        theta_min,
    )
    return SweepTable(
        "crb",
        [
            "alpha0", "r", "purity", "n_bar", "snl",
            "crb_min", "crb_min_approx", "delta_mul_min", "delta_bin_min", "theta_min_bin",
        ],
        [row],
        table_metadata("crb", config),
    )


def fwhm_table(config: ExperimentConfig) -> SweepTable:
    params = derive_params(config.state())
    scheme = config.scheme()
    width = center_bin_fwhm(params, scheme)
    row = (scheme.a, width, RAYLEIGH_FWHM / width, RAYLEIGH_FWHM)
    return SweepTable(
        "fwhm",
        ["bin_a", "fwhm", "resolution_gain", "rayleigh_fwhm"],
        [row],
        table_metadata("fwhm", config),
    )


def simulate_tables(config: ExperimentConfig) -> list[SweepTable]:
    if config.theta is None:
        raise ConfigError("simulate requires --theta (the true phase)")
    params = derive_params(config.state())
    scheme = config.scheme()
    replicas = run_replicas(
        params, scheme, config.theta, config.shots, config.replicas, config.seed
    )
    meta = table_metadata("simulate", config)
    counts = SweepTable(
        "counts",
        ["replica", "n_minus", "n_zero", "n_plus"],
        [
            (i, rec.n_minus, rec.n_zero, rec.n_plus)
            for i, rec in enumerate(replicas.records)
        ],
        dict(meta),
    )
    stats = empirical_stats(replicas)
    probs = outcome_probs(params, scheme, config.theta)
    expected = probs.as_dict()
    stats_rows = [
        (
            k,
            stats.mean_freq[k],
            stats.std_freq[k] if stats.std_freq is not None else math.nan,
            float(expected[k]),
        )
        for k in ("-", "0", "+")
    ]
    stats_table = SweepTable(
        "frequencies",
        ["outcome", "mean_freq", "std_freq", "expected_prob"],
        stats_rows,
        dict(meta),
    )
    return [counts, stats_table]


def estimate_tables(config: ExperimentConfig, estimator: str = "both") -> list[SweepTable]:
    if config.theta is None:
        raise ConfigError("estimate requires --theta (the true phase)")
    if estimator not in ("mle", "composite", "both"):
        raise ConfigError(f"estimator must be mle, composite, or both, got {estimator!r}")
    params = derive_params(config.state())
    scheme = config.scheme()
    replicas = run_replicas(
        params, scheme, config.theta, config.shots, config.replicas, config.seed
    )
    meta = table_metadata("estimate", config)
    methods = ("mle", "composite") if estimator == "both" else (estimator,)
    per_replica = []
    summary_rows = []
    f_mul = float(multi_cfi(params, scheme, config.theta))
    for method in methods:
        estimates = []
        for i, rec in enumerate(replicas.records):
            if method == "mle":
                res = mle(rec, params, scheme)
            else:
                res = composite_estimate(rec, params, scheme)
            per_replica.append(
                (i, method, res.estimate, res.sigma if res.sigma is not None else math.nan)
            )
            if res.failure is None:
                estimates.append(res.estimate)
        summary = evaluate_replicas(estimates, config.theta, config.shots)
        summary_rows.append(
            (
                method,
                summary.theta_true,
                summary.mean_estimate,
                summary.bias,
                summary.std_dev,
                summary.rmse,
                summary.per_measurement,
                _delta_or_sentinel(f_mul),
                len(replicas) - len(estimates),
            )
        )
    estimates_table = SweepTable(
        "estimates",
        ["replica", "estimator", "estimate", "sigma"],
        per_replica,
        dict(meta),
    )
    summary_table = SweepTable(
        "estimate_summary",
        [
            "estimator", "theta_true", "mean_estimate", "bias", "std_dev",
            "rmse", "sqrt_n_rmse", "delta_mul_ref", "failures",
        ],
        summary_rows,
        dict(meta),
    )
    return [estimates_table, summary_table]


def _theta_values(config: ExperimentConfig) -> np.ndarray:
    if config.theta_grid is not None:
        return grid_points(config.theta_grid)
    if config.theta is not None:
        return np.array([config.theta])
    raise ConfigError("requires --theta or --theta-grid")
