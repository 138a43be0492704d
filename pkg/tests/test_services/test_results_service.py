import json
from datetime import datetime, timezone

import pytest

from app.schemas.experiment import CurveId, CurvePoint, ExperimentConfig, RunManifest
from app.services.exceptions import ConfigError, ResultsError
from app.services.experiment import figure5_config
from app.services.results import (
    format_curves,
    manifest_path,
    parse_config,
    read_curves,
    record_run,
    tool_version,
    write_curves,
    write_manifest,
)


def _points() -> list[CurvePoint]:
    points = []
    for curve in (CurveId.HYBRID_ZF, CurveId.ANALOG_ONLY):
        for snr_db in (10.0, -5.0, 0.0):
            points.append(
                CurvePoint(
                    curve_id=curve,
                    snr_db=snr_db,
                    mean_rate=1.0 / 3.0 + snr_db,
                    std_err=0.0123456789123,
                    trials_used=9,
                    outages=1,
                )
            )
    return points


def _write_json(path, data) -> None:
    path.write_text(json.dumps(data))


def test_parse_minimal_config_fills_defaults(tmp_path):
    path = tmp_path / "config.json"
    _write_json(path, {"M": 8, "N": 2, "P": 2})
    config = parse_config(path)
    assert config.J == 180
    assert config.spacing_ratio == 0.5


def test_parse_rejects_n_above_m(tmp_path):
    path = tmp_path / "config.json"
    _write_json(path, {"M": 4, "N": 10, "P": 1})
    with pytest.raises(ConfigError, match="N ≤ M invariant"):
        parse_config(path)


def test_parse_lists_unknown_keys(tmp_path):
    path = tmp_path / "config.json"
    _write_json(path, {"M": 8, "N": 2, "P": 2, "antennas": 3, "seed": 1})
    with pytest.raises(ConfigError) as excinfo:
        parse_config(path)
    assert "unknown key 'antennas'" in excinfo.value.messages
    assert "unknown key 'seed'" in excinfo.value.messages


def test_parse_field_level_messages(tmp_path):
    path = tmp_path / "config.json"
    _write_json(path, {"M": 8, "N": 2, "P": 0, "scatter_mode": "sparse"})
    with pytest.raises(ConfigError) as excinfo:
        parse_config(path)
    locations = [message.split(":")[0] for message in excinfo.value.messages]
    assert "P" in locations
    assert "scatter_mode" in locations


def test_parse_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        parse_config(tmp_path / "missing.json")


def test_parse_malformed_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{M: 8")
    with pytest.raises(ConfigError, match="not valid JSON"):
        parse_config(path)


def test_parse_rejects_non_object(tmp_path):
    path = tmp_path / "config.json"
    _write_json(path, [1, 2])
    with pytest.raises(ConfigError, match="JSON object"):
        parse_config(path)


def test_manifest_config_echo_round_trips(tmp_path):
    config = figure5_config()
    manifest = RunManifest(
        config_echo=config,
        tool_version=tool_version(),
        started_at=datetime.now(timezone.utc),
        finished_at=datetime.now(timezone.utc),
        master_seed=config.master_seed,
    )
    path = tmp_path / "run.manifest.json"
    write_manifest(manifest, path)
    assert parse_config(path) == config

    echo_only = tmp_path / "echo.json"
    _write_json(echo_only, json.loads(path.read_text())["config_echo"])
    assert parse_config(echo_only) == config


def test_write_curves_shape_and_order(tmp_path):
    path = tmp_path / "curves.csv"
    write_curves(_points(), path)
    lines = path.read_text().splitlines()
    assert lines[0] == "curve_id,snr_db,mean_rate_bps_hz,std_err,trials_used,outages"
    assert len(lines) == 7
    assert [line.split(",")[:2] for line in lines[1:4]] == [
        ["analog_only", "-5"],
        ["analog_only", "0"],
        ["analog_only", "10"],
    ]
    assert lines[1] == "analog_only,-5,-4.66666667,0.0123456789,9,1"


def test_curves_reserialize_byte_for_byte(tmp_path):
    path = tmp_path / "curves.csv"
    write_curves(_points(), path)
    assert format_curves(read_curves(path)) == path.read_text()


def test_write_empty_curves_creates_nothing(tmp_path):
    path = tmp_path / "curves.csv"
    with pytest.raises(ResultsError):
        write_curves([], path)
    assert not path.exists()


def test_write_curves_unwritable_path(tmp_path):
    with pytest.raises(ResultsError, match="cannot write"):
        write_curves(_points(), tmp_path / "missing" / "curves.csv")


def test_read_curves_rejects_bad_header(tmp_path):
    path = tmp_path / "curves.csv"
    path.write_text("a,b\n")
    with pytest.raises(ResultsError, match="header"):
        read_curves(path)


def test_read_curves_rejects_bad_row(tmp_path):
    path = tmp_path / "curves.csv"
    path.write_text(
        "curve_id,snr_db,mean_rate_bps_hz,std_err,trials_used,outages\nhybrid_zf,0,x,0,1,0\n"
    )
    with pytest.raises(ResultsError, match=":2:"):
        read_curves(path)


def test_manifest_path_sits_next_to_csv(tmp_path):
    assert manifest_path(tmp_path / "fig4.csv") == tmp_path / "fig4.manifest.json"


def test_record_run_writes_csv_and_manifest(tmp_path):
    config = ExperimentConfig(
        M=16,
        N=2,
        P=2,
        trials=3,
        snr_db_range=[0.0, 10.0],
        curves=[CurveId.HYBRID_ZF, CurveId.BOUND_COR1],
        master_seed=5,
    )
    csv_path = tmp_path / "out" / "curves.csv"
    points = record_run(config, csv_path, threads=1)
    assert csv_path.read_text() == format_curves(points)
    assert len(read_curves(csv_path)) == len(points) == 4
    manifest = json.loads(manifest_path(csv_path).read_text())
    assert manifest["master_seed"] == 5
    assert manifest["tool_version"] == tool_version()
    assert parse_config(manifest_path(csv_path)) == config
