"""Run the property and oracle checks."""

import typer

from app.services.checks import run_checks
from cli.errors import EXIT_RUNTIME_ERROR, handle_errors
from cli.options import get_options
from cli.output import print_checks


def check(ctx: typer.Context) -> None:
    """Run every check; exits non-zero when any fails.

    --trials replaces the trial count of every Monte Carlo check.
    """
    options = get_options(ctx)
    with handle_errors():
        results = run_checks(options.seed, options.trials, options.threads)
    print_checks(results)
    if not all(result.passed for result in results):
        raise typer.Exit(EXIT_RUNTIME_ERROR)
