"""Experiment config loading, curve CSV serialization and run manifests."""

import csv
import io
import json
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from app import __version__
from app.core.config import logger, settings
from app.schemas.experiment import CurveId, CurvePoint, ExperimentConfig, RunManifest
from app.services.exceptions import ConfigError, ResultsError, validation_messages
from app.services.experiment import run_experiment

CSV_HEADER = (
    "curve_id",
    "snr_db",
    "mean_rate_bps_hz",
    "std_err",
    "trials_used",
    "outages",
)
MANIFEST_SUFFIX = ".manifest.json"


def tool_version() -> str:
    try:
        return version(settings.PROJECT_NAME)
    except PackageNotFoundError:
        return __version__


def parse_config(path: Path) -> ExperimentConfig:
    """Load an ExperimentConfig from a JSON document.

    A run manifest is accepted too; its ``config_echo`` block is used.
    """
    if not path.is_file():
        raise ConfigError([f"config file not found: {path}"])
    try:
        data: Any = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError([f"cannot read {path}: {e}"]) from e
    except json.JSONDecodeError as e:
        raise ConfigError([f"{path} is not valid JSON: {e}"]) from e
    if not isinstance(data, dict):
        raise ConfigError([f"{path} must hold a JSON object"])
    if "config_echo" in data:
        data = data["config_echo"]
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(validation_messages(e)) from e


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def format_curves(points: list[CurvePoint]) -> str:
    """Canonical CSV text: rows sorted by (curve_id, snr_db), 9 significant digits."""
    if not points:
        raise ResultsError("no curve points to write")  # noqa: TRY003
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for point in sorted(points, key=lambda p: (p.curve_id.value, p.snr_db)):
        writer.writerow(
            [
                point.curve_id.value,
                _fmt(point.snr_db),
                _fmt(point.mean_rate),
                _fmt(point.std_err),
                point.trials_used,
                point.outages,
            ]
        )
    return buffer.getvalue()


def write_curves(points: list[CurvePoint], path: Path) -> None:
    text = format_curves(points)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ResultsError(f"cannot write curves to {path}: {e}") from e  # noqa: TRY003
    logger.info("Wrote %d curve points to %s", len(points), path)


def read_curves(path: Path) -> list[CurvePoint]:
    """Parse a CSV written by write_curves back into curve points."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ResultsError(f"cannot read curves from {path}: {e}") from e  # noqa: TRY003
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise ResultsError(f"{path} does not start with the curve CSV header")  # noqa: TRY003
    points = []
    for line_no, row in enumerate(reader, start=2):
        try:
            curve_id, snr_db, mean_rate, std_err, trials_used, outages = row
            points.append(
                CurvePoint(
                    curve_id=CurveId(curve_id),
                    snr_db=float(snr_db),
                    mean_rate=float(mean_rate),
                    std_err=float(std_err),
                    trials_used=int(trials_used),
                    outages=int(outages),
                )
            )
        except (ValueError, ValidationError) as e:
            raise ResultsError(f"{path}:{line_no}: malformed row ({e})") from e  # noqa: TRY003
    return points


def manifest_path(csv_path: Path) -> Path:
    """Sidecar next to the CSV: curves.csv -> curves.manifest.json."""
    return csv_path.with_name(csv_path.stem + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, path: Path) -> None:
    try:
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise ResultsError(f"cannot write manifest to {path}: {e}") from e  # noqa: TRY003


def record_run(
    config: ExperimentConfig, csv_path: Path, threads: int | None = None
) -> list[CurvePoint]:
    """Run an experiment and write its curve CSV plus the manifest sidecar."""
    try:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ResultsError(f"cannot create {csv_path.parent}: {e}") from e  # noqa: TRY003
    started_at = datetime.now(timezone.utc)
    points = run_experiment(config, threads)
    finished_at = datetime.now(timezone.utc)
    write_curves(points, csv_path)
    write_manifest(
        RunManifest(
            config_echo=config,
            tool_version=tool_version(),
            started_at=started_at,
            finished_at=finished_at,
            master_seed=config.master_seed,
        ),
        manifest_path(csv_path),
    )
    return points
