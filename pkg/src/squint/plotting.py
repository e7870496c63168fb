"""Render sweep tables to PNG files next to their delimited output.

The renderers are deliberately plain: one figure per table, dispatched
on the table name, with a generic x/y line plot as fallback. They are
report aids, not the data product; the CSV/JSON tables remain the
authoritative output.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .sweeps import SweepTable


def render_table(table: SweepTable, outdir: Path, stem: str | None = None) -> Path:
    """Render one table to <outdir>/<stem>.png and return the path."""
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"{stem or table.name}.png"
    renderer = _RENDERERS.get(table.name, _render_generic)
    fig = renderer(table)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_tables(tables: list[SweepTable], outdir: Path) -> list[Path]:
    return [render_table(t, outdir) for t in tables]


def _values(table: SweepTable, column: str) -> np.ndarray:
    raw = table.column(column)
    return np.array(
        [float(c) if not isinstance(c, str) else math.nan for c in raw], dtype=float
    )


def _finite_mask(values: np.ndarray) -> np.ndarray:
    return np.isfinite(values)


def _render_generic(table: SweepTable):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    x = _values(table, table.columns[0])
    for name in table.columns[1:]:
        y = _values(table, name)
        m = _finite_mask(y)
        if m.any():
            ax.plot(x[m], y[m], label=name, lw=1.0)
    ax.set_xlabel(table.columns[0])
    ax.legend(fontsize=7)
    ax.set_title(table.name)
    fig.tight_layout()
    return fig


def _render_density(table: SweepTable):
    theta = _values(table, "theta")
    p = _values(table, "p")
    z = _values(table, "density")
    t_ax = np.unique(theta)
    p_ax = np.unique(p)
    grid = z.reshape(len(t_ax), len(p_ax)).T
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    mesh = ax.pcolormesh(t_ax, p_ax, grid, shading="auto", cmap="viridis")
    ax.plot(t_ax, -0.5 * _alpha0_from(table) * np.sin(t_ax), "r--", lw=1.0)
    fig.colorbar(mesh, ax=ax, label="density")
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("p")
    ax.set_title(table.name)
    fig.tight_layout()
    return fig


def _alpha0_from(table: SweepTable) -> float:
    config = table.metadata.get("config", {})
    if "alpha0" in config:
        return float(config["alpha0"])
    n_bar = float(config.get("n_bar", 0.0))
    sinh2r = float(config.get("sinh2r", 0.0))
    return math.sqrt(max(n_bar - sinh2r, 0.0))


def _render_probs(table: SweepTable):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    theta = _values(table, "theta")
    for name, style in (("p_minus", "-"), ("p_zero", "-"), ("p_plus", "-"),
                        ("scaled_signal", "--")):
        if name in table.columns:
            ax.plot(theta, _values(table, name), style, label=name, lw=1.2)
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("probability / signal")
    ax.legend(fontsize=8)
    ax.set_title(table.name)
    fig.tight_layout()
    return fig


def _render_sensitivity(table: SweepTable):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    theta = _values(table, "theta")
    for name in ("delta_bin", "delta_mul", "snl"):
        if name in table.columns:
            y = _values(table, name)
            m = _finite_mask(y)
            ax.plot(theta[m], y[m], label=name, lw=1.2)
    ax.set_yscale("log")
    ax.set_xlabel("theta (rad)")
    ax.set_ylabel("per-shot sensitivity (rad)")
    ax.legend(fontsize=8)
    ax.set_title(table.name)
    fig.tight_layout()
    return fig


def _render_ab_grid(table: SweepTable):
    a = _values(table, "bin_a")
    em = _values(table, "e_minus_r")
    a_ax = np.unique(a)
    em_ax = np.unique(em)
    panels = [c for c in ("resolution_gain", "db_bin", "db_mul", "scaling")
              if c in table.columns]
    fig, axes = plt.subplots(2, 2, figsize=(9.2, 7.0))
    for ax, name in zip(axes.flat, panels):
        z = _values(table, name).reshape(len(em_ax), len(a_ax))
        mesh = ax.pcolormesh(a_ax, em_ax, z, shading="auto", cmap="magma")
        fig.colorbar(mesh, ax=ax, label=name)
        ax.set_xlabel("bin_a")
        ax.set_ylabel("e^-r")
    for ax in axes.flat[len(panels):]:
        ax.set_visible(False)
    fig.suptitle(table.name)
    fig.tight_layout()
    return fig


def _render_scaling(table: SweepTable):
    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.0))
    n_bar = _values(table, "n_bar")
    for name in ("delta_mul_min", "delta_bin_min", "crb_min", "crb_min_approx", "snl"):
        if name in table.columns:
            axes[0].loglog(n_bar, _values(table, name), "o-", ms=3, lw=1.0, label=name)
    axes[0].set_xlabel("n_bar")
    axes[0].set_ylabel("per-shot sensitivity (rad)")
    axes[0].legend(fontsize=7)
    for name in ("fwhm_bin", "fwhm_mul"):
        if name in table.columns:
            axes[1].loglog(n_bar, _values(table, name), "s-", ms=3, lw=1.0, label=name)
    axes[1].loglog(n_bar, 2.0 * math.pi / 3.0 / np.sqrt(n_bar), "k--", lw=0.8,
                   label="rayleigh/sqrt(n_bar)")
    axes[1].set_xlabel("n_bar")
    axes[1].set_ylabel("FWHM (rad)")
    axes[1].legend(fontsize=7)
    fig.suptitle(table.name)
    fig.tight_layout()
    return fig


def _render_replicas(table: SweepTable):
    theta0 = _values(table, "theta0")
    fig, axes = plt.subplots(2, 2, figsize=(9.6, 7.0))
    ax = axes[0, 0]
    for k, color in (("minus", "tab:blue"), ("zero", "tab:green"), ("plus", "tab:red")):
        ax.errorbar(theta0, _values(table, f"freq_{k}_mean"),
                    yerr=_values(table, f"freq_{k}_std"), fmt="o", ms=3,
                    color=color, label=f"freq {k}")
        ax.plot(theta0, _values(table, f"prob_{k}"), color=color, lw=1.0)
    ax.legend(fontsize=7)
    ax.set_xlabel("theta0")
    ax.set_ylabel("frequency")

    ax = axes[0, 1]
    ax.errorbar(theta0, _values(table, "mle_sqrtn_sigma_mean"),
                yerr=_values(table, "mle_sqrtn_sigma_std"), fmt="o", ms=3,
                label="sqrt(N) sigma (mle)")
    dm = _values(table, "delta_mul")
    ax.plot(theta0, dm, lw=1.2, label="delta_mul")
    ax.plot(theta0, _values(table, "snl"), "k--", lw=0.8, label="snl")
    ax.legend(fontsize=7)
    ax.set_xlabel("theta0")

    ax = axes[1, 0]
    ax.errorbar(theta0, _values(table, "mle_bias"), yerr=_values(table, "mle_std"),
                fmt="o", ms=3, label="mle bias")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.legend(fontsize=7)
    ax.set_xlabel("theta0")

    ax = axes[1, 1]
    ax.errorbar(theta0, _values(table, "comp_bias"), yerr=_values(table, "comp_std"),
                fmt="o", ms=3, label="composite bias")
    ax.plot(theta0, _values(table, "comp_sqrtn_rmse"), "s", ms=3,
            label="sqrt(N) rmse (composite)")
    ax.plot(theta0, dm, lw=1.0, label="delta_mul")
    ax.legend(fontsize=7)
    ax.set_xlabel("theta0")
    fig.suptitle(table.name)
    fig.tight_layout()
    return fig


_RENDERERS = {
    "pdf": _render_density,
    "fig1_pdf": _render_density,
    "probs": _render_probs,
    "fig1_probs": _render_probs,
    "theta_scan": _render_sensitivity,
    "fig1_sensitivity": _render_sensitivity,
    "ab_grid_scan": _render_ab_grid,
    "fig2_grid": _render_ab_grid,
    "fig3_scaling": _render_scaling,
    "fig4_replicas": _render_replicas,
}
