"""Experiment commands: run a config file or one of the figure presets."""

from pathlib import Path
from typing import Any

import typer

from app.schemas.experiment import ExperimentConfig
from app.services.experiment import (
    figure4_config,
    figure5_config,
    figure5_sparse_config,
    quick_config,
    with_overrides,
)
from app.services.results import manifest_path, parse_config, record_run
from cli.errors import handle_errors
from cli.options import get_options
from cli.output import print_curves, print_saved


def _out_option() -> Any:
    return typer.Option(..., "--out", "-o", help="Output directory")


def _execute(
    ctx: typer.Context, config: ExperimentConfig, out: Path, filename: str
) -> None:
    options = get_options(ctx)
    with handle_errors():
        config = with_overrides(config, seed=options.seed, trials=options.trials)
        csv_path = out / filename
        points = record_run(config, csv_path, options.threads)
    print_curves(points, title=filename)
    print_saved(csv_path)
    print_saved(manifest_path(csv_path))


def run(
    ctx: typer.Context,
    config: Path = typer.Option(..., "--config", "-c", help="Experiment config (JSON)"),
    out: Path = _out_option(),
) -> None:
    """Run the experiment described by a config file."""
    with handle_errors():
        parsed = parse_config(config)
    _execute(ctx, parsed, out, "curves.csv")


def fig4(ctx: typer.Context, out: Path = _out_option()) -> None:
    """Hybrid ZF vs fully digital with the rate bounds (M=100, N=10)."""
    _execute(ctx, figure4_config(), out, "fig4.csv")


def fig5(
    ctx: typer.Context,
    out: Path = _out_option(),
    sparse: bool = typer.Option(
        False, "--sparse", help="Single-path channel without a separate LOS term"
    ),
) -> None:
    """Hybrid ZF vs analog-only steering (M=100, N=4, P=16)."""
    if sparse:
        _execute(ctx, figure5_sparse_config(), out, "fig5_sparse.csv")
    else:
        _execute(ctx, figure5_config(), out, "fig5.csv")


def quick(ctx: typer.Context, out: Path = _out_option()) -> None:
    """Small preset for smoke runs (M=64, N=4, P=8)."""
    _execute(ctx, quick_config(), out, "quick.csv")
