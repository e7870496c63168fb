"""Command-line interface.

Subcommands: pdf, probs, cfi, crb, fwhm, scan, simulate, estimate,
reproduce <fig1|fig2|fig3|fig4>, fit. Every command emits one or more
delimited tables (CSV by default, JSON with --format json) and, when
--plot is given, a PNG rendering of each table next to the data.

Flags may also come from a config file of flat "key = value" lines
(keys match the long flag names); explicit flags win over file values.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import ConfigError, NumericalFailure
from .sweeps import (
    FIGURE_IDS,
    ExperimentConfig,
    SweepTable,
    cfi_table,
    crb_table,
    estimate_tables,
    fit_power_law,
    fwhm_table,
    parse_grid,
    pdf_table,
    probs_table,
    reproduce,
    scan,
    simulate_tables,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squint",
        description="Squeezed-state interferometry: binned homodyne phase measurement toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, state: bool = True) -> None:
        p.add_argument("--config", type=Path, help="flat key = value config file")
        if state:
            p.add_argument("--alpha0", type=float, help="coherent amplitude")
            p.add_argument("--n-bar", type=float, help="mean total photon number")
            squeeze = p.add_mutually_exclusive_group()
            squeeze.add_argument("--r", type=float, help="squeeze magnitude r")
            squeeze.add_argument("--e-minus-r", type=float, help="squeeze factor e^-r")
            squeeze.add_argument("--sinh2r", type=float, help="squeezed-mode photons sinh^2 r")
            p.add_argument("--purity", type=float, help="squeezed-input purity (0, 1]")
            p.add_argument("--bin-a", type=float, help="half bin width a")
        p.add_argument("--theta", type=float, help="phase (rad)")
        p.add_argument("--theta-grid", help="phase grid lo:hi:count")
        p.add_argument("--p-grid", help="quadrature grid lo:hi:count")
        p.add_argument("--bin-a-grid", help="bin-width grid lo:hi:count")
        p.add_argument("--e-minus-r-grid", help="squeeze-factor grid lo:hi:count")
        p.add_argument("--shots", type=int, help="measurements per run")
        p.add_argument("--replicas", type=int, help="independent runs")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--out", type=Path, help="output file (or directory for multi-table commands)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--plot", action="store_true", help="also render PNG figures")

    for name, help_text in (
        ("pdf", "quadrature outcome density over a (theta, p) grid"),
        ("probs", "binned outcome probabilities and derivatives"),
        ("cfi", "Fisher information of the binned and unbinned records"),
        ("crb", "best sensitivities and Cramer-Rao summary"),
        ("fwhm", "fringe width of the normalized central-bin signal"),
        ("scan", "sweep quantities over a theta or (bin width, squeeze) grid"),
        ("simulate", "Monte Carlo binned counts at a true phase"),
        ("estimate", "run phase estimators on simulated replicas"),
    ):
        p = sub.add_parser(name, help=help_text)
        add_common(p)
        if name == "estimate":
            p.add_argument("--estimator", choices=("mle", "composite", "both"), default="both")

    p = sub.add_parser("reproduce", help="emit a preset study (fig1..fig4)")
    p.add_argument("figure", choices=FIGURE_IDS)
    add_common(p)

    p = sub.add_parser("fit", help="power-law fit value = c * x^-q of two table columns")
    p.add_argument("--in", dest="infile", type=Path, required=True, help="input CSV")
    p.add_argument("--x-col", required=True)
    p.add_argument("--y-col", required=True)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def read_config_file(path: Path) -> dict:
    """Parse flat 'key = value' lines; keys mirror the long flag names."""
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    values: dict = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_FIELDS = {
    "alpha0": float,
    "n_bar": float,
    "r": float,
    "e_minus_r": float,
    "sinh2r": float,
    "purity": float,
    "bin_a": float,
    "theta": float,
    "theta_grid": parse_grid,
    "p_grid": parse_grid,
    "bin_a_grid": parse_grid,
    "e_minus_r_grid": parse_grid,
    "shots": int,
    "replicas": int,
    "seed": int,
}


def overrides_from_args(args: argparse.Namespace) -> dict:
    """Merge config-file values (low priority) with explicit flags.

    Only keys the user actually supplied appear in the result, so
    preset defaults survive unless overridden.
    """
    merged: dict = {}
    if getattr(args, "config", None) is not None:
        for key, raw in read_config_file(args.config).items():
            if key not in _CONFIG_FIELDS:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                merged[key] = _CONFIG_FIELDS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}") from exc
    for key, conv in _CONFIG_FIELDS.items():
        value = getattr(args, key, None)
        if value is None:
            continue
        merged[key] = conv(value) if isinstance(value, str) else value
    return merged


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(**overrides_from_args(args))


def write_tables(tables: list[SweepTable], args: argparse.Namespace) -> None:
    fmt = args.format
    out: Path | None = getattr(args, "out", None)
    if out is None:
        if getattr(args, "plot", False):
            raise ConfigError("--plot requires --out (figures are written next to the data)")
        for table in tables:
            if fmt == "csv":
                sys.stdout.write(table.to_csv())
            else:
                sys.stdout.write(table.to_json() + "\n")
        return
    if len(tables) == 1 and out.suffix:
        paths = {tables[0].name: out}
        out_dir = out.parent
    else:
        out_dir = out
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {t.name: out_dir / f"{t.name}.{fmt}" for t in tables}
    for table in tables:
        path = paths[table.name]
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            if fmt == "csv":
                table.write_csv(fh)
            else:
                fh.write(table.to_json() + "\n")
        print(f"wrote {path}", file=sys.stderr)
    if getattr(args, "plot", False):
        from .plotting import render_table

        for table in tables:
            png = render_table(table, paths[table.name].parent, paths[table.name].stem)
            print(f"wrote {png}", file=sys.stderr)


def run_fit(args: argparse.Namespace) -> list[SweepTable]:
    rows = []
    with open(args.infile, newline="") as fh:
        reader = csv.DictReader(line for line in fh if not line.startswith("#"))
        for record in reader:
            if args.x_col not in record or args.y_col not in record:
                raise ConfigError(
                    f"columns {args.x_col!r}/{args.y_col!r} not found in {args.infile}"
                )
            try:
                rows.append((float(record[args.x_col]), float(record[args.y_col])))
            except ValueError as exc:
                raise ConfigError(f"non-numeric cell in fit input: {exc}") from exc
    fit = fit_power_law(rows)
    table = SweepTable(
        "power_law_fit",
        ["x_col", "y_col", "prefactor", "exponent", "residual_rms", "points"],
        [(args.x_col, args.y_col, fit.prefactor, fit.exponent, fit.residual_rms, len(rows))],
        {
            "tool": "squint",
            "command": "fit",
            "input": str(args.infile),
        },
    )
    return [table]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            tables = run_fit(args)
        elif args.command == "reproduce":
            tables = reproduce(args.figure, overrides_from_args(args))
        else:
            config = config_from_args(args)
            if args.command == "pdf":
                tables = [pdf_table(config)]
            elif args.command == "probs":
                tables = [probs_table(config)]
            elif args.command == "cfi":
                tables = [cfi_table(config)]
            elif args.command == "crb":
                tables = [crb_table(config)]
            elif args.command == "fwhm":
                tables = [fwhm_table(config)]
            elif args.command == "scan":
                tables = [scan(config)]
            elif args.command == "simulate":
                tables = simulate_tables(config)
            elif args.command == "estimate":
                tables = estimate_tables(config, args.estimator)
            else:  # pragma: no cover - argparse enforces the choices
                raise ConfigError(f"unknown command {args.command!r}")
        write_tables(tables, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
