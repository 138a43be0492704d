"""Map service errors to exit codes: 1 for configuration, 2 for runtime."""

from collections.abc import Iterator
from contextlib import contextmanager

import numpy as np
import typer

from app.services.exceptions import ConfigError, ServiceError
from cli.output import err_console

EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


@contextmanager
def handle_errors() -> Iterator[None]:
    try:
        yield
    except ConfigError as e:
        err_console.print("[red]Invalid configuration:[/red]")
        for message in e.messages:
            err_console.print(f"  {message}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e
    except (ServiceError, np.linalg.LinAlgError) as e:
        err_console.print(f"[red]Error:[/red] {e}")
        raise typer.Exit(EXIT_RUNTIME_ERROR) from e
