"""Global options shared by every command through the typer context."""

from dataclasses import dataclass

import typer


@dataclass(frozen=True)
class RunOptions:
    seed: int | None = None
    trials: int | None = None
    threads: int | None = None


def get_options(ctx: typer.Context) -> RunOptions:
    if isinstance(ctx.obj, RunOptions):
        return ctx.obj
    return RunOptions()
