import typer

from cli.checks import check
from cli.experiment import fig4, fig5, quick, run
from cli.options import RunOptions

app = typer.Typer(
    name="hybridmimo",
    help="Multiuser hybrid mmWave MIMO link-level simulator",
    no_args_is_help=True,
)


def _callback(
    ctx: typer.Context,
    seed: int | None = typer.Option(None, "--seed", help="Master seed override"),
    trials: int | None = typer.Option(None, "--trials", help="Trial count override"),
    threads: int | None = typer.Option(
        None, "--threads", help="Worker threads (default: WORKER_THREADS or CPUs)"
    ),
) -> None:
    ctx.obj = RunOptions(seed=seed, trials=trials, threads=threads)


app.callback()(_callback)


app.command("run")(run)
app.command("fig4")(fig4)
app.command("fig5")(fig5)
app.command("quick")(quick)
app.command("check")(check)


def main() -> None:
    app()
