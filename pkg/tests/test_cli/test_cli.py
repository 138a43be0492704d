import json

from typer.testing import CliRunner

from app.schemas.checks import CheckResult
from cli import app

runner = CliRunner()


def _write_config(path, **overrides) -> None:
    config = {
        "M": 16,
        "N": 2,
        "P": 2,
        "snr_db_range": [0.0, 10.0],
        "trials": 3,
        "curves": ["hybrid_zf", "analog_only", "bound_thm1"],
    }
    config.update(overrides)
    path.write_text(json.dumps(config))


def test_run_writes_curves_and_manifest(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config)
    result = runner.invoke(app, ["run", "--config", str(config), "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    lines = (tmp_path / "out" / "curves.csv").read_text().splitlines()
    assert len(lines) == 1 + 3 * 2
    manifest = json.loads((tmp_path / "out" / "curves.manifest.json").read_text())
    assert manifest["config_echo"]["M"] == 16


def test_global_flags_override_config(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config)
    out = tmp_path / "out"
    result = runner.invoke(
        app,
        ["--seed", "42", "--trials", "2", "--threads", "1", "run", "-c", str(config), "-o", str(out)],
    )
    assert result.exit_code == 0, result.output
    manifest = json.loads((out / "curves.manifest.json").read_text())
    assert manifest["master_seed"] == 42
    assert manifest["config_echo"]["trials"] == 2


def test_run_invalid_config_exits_1(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config, M=1, N=4)
    result = runner.invoke(app, ["run", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code == 1
    assert not (tmp_path / "curves.csv").exists()


def test_run_missing_config_exits_1(tmp_path):
    result = runner.invoke(
        app, ["run", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]
    )
    assert result.exit_code == 1


def test_invalid_trials_flag_exits_1(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config)
    result = runner.invoke(
        app, ["--trials", "0", "run", "--config", str(config), "--out", str(tmp_path)]
    )
    assert result.exit_code == 1


def test_invalid_threads_flag_exits_1(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config)
    out = tmp_path / "out"
    result = runner.invoke(app, ["--threads", "0", "run", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 1
    assert not (out / "curves.csv").exists()


def test_unwritable_output_exits_2(tmp_path):
    config = tmp_path / "config.json"
    _write_config(config)
    blocker = tmp_path / "file"
    blocker.write_text("")
    result = runner.invoke(app, ["run", "--config", str(config), "--out", str(blocker)])
    assert result.exit_code == 2


def test_fig4_is_byte_identical_across_runs(tmp_path):
    args = ["--seed", "7", "--trials", "3", "fig4", "--out"]
    first = runner.invoke(app, [*args, str(tmp_path / "a")])
    second = runner.invoke(app, [*args, str(tmp_path / "b")])
    assert first.exit_code == 0, first.output
    assert second.exit_code == 0, second.output
    assert (tmp_path / "a" / "fig4.csv").read_bytes() == (tmp_path / "b" / "fig4.csv").read_bytes()


def test_fig5_sparse_writes_own_file(tmp_path):
    result = runner.invoke(app, ["--trials", "2", "fig5", "--sparse", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "fig5_sparse.csv").exists()
    assert (tmp_path / "fig5_sparse.manifest.json").exists()


def test_quick_preset_echoes_overrides(tmp_path):
    result = runner.invoke(app, ["--seed", "5", "--trials", "2", "quick", "-o", str(tmp_path)])
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "quick.manifest.json").read_text())
    assert manifest["master_seed"] == 5
    assert manifest["config_echo"]["trials"] == 2
    assert manifest["config_echo"]["M"] == 64


def _fake_checks(passed: bool):
    def fake(seed, trials, threads):
        assert (seed, trials, threads) == (3, 5, 2)
        return [CheckResult(name="demo", passed=passed, detail="x")]

    return fake


def test_check_exit_codes(monkeypatch):
    args = ["--seed", "3", "--trials", "5", "--threads", "2", "check"]
    monkeypatch.setattr("cli.checks.run_checks", _fake_checks(True))
    assert runner.invoke(app, args).exit_code == 0
    monkeypatch.setattr("cli.checks.run_checks", _fake_checks(False))
    assert runner.invoke(app, args).exit_code == 2
