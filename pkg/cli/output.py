"""Output formatting helpers for CLI commands."""

from pathlib import Path
from typing import Any

from rich.console import Console
from rich.table import Table

from app.schemas.checks import CheckResult
from app.schemas.experiment import CurvePoint

console = Console()
err_console = Console(stderr=True)

CURVE_COLUMNS = ["Curve", "SNR (dB)", "Rate (bit/s/Hz)", "Std err", "Trials", "Outages"]


def print_table(
    columns: list[str], rows: list[list[Any]], title: str | None = None
) -> None:
    table = Table(title=title, show_lines=False)
    for col in columns:
        table.add_column(col, overflow="fold")
    for row in rows:
        table.add_row(*[str(v) if v is not None else "" for v in row])
    console.print(table)


def print_curves(points: list[CurvePoint], title: str | None = None) -> None:
    rows = [
        [
            p.curve_id.value,
            f"{p.snr_db:g}",
            f"{p.mean_rate:.4f}",
            f"{p.std_err:.4f}",
            p.trials_used,
            p.outages,
        ]
        for p in sorted(points, key=lambda p: (p.curve_id.value, p.snr_db))
    ]
    print_table(CURVE_COLUMNS, rows, title=title)


def print_checks(results: list[CheckResult]) -> None:
    table = Table(title="Checks", show_lines=False)
    table.add_column("Check", style="bold cyan")
    table.add_column("Result")
    table.add_column("Detail", overflow="fold")
    for result in results:
        status = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, result.detail)
    console.print(table)


def print_saved(path: Path) -> None:
    console.print(f"[green]Saved to {path}[/green]")
