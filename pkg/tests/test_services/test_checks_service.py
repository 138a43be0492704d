import pytest

from app.services.checks import (
    check_bound_dominance,
    check_corollary_coincidence,
    check_determinism,
    check_figure5_ordering,
    check_gap_shrinks,
    check_grid_recovery,
    check_ls_consistency,
    check_scatter_expectation,
    check_trace_inverse,
    check_zf_nulling,
    run_checks,
)
from app.services.exceptions import ConfigError


def _assert_passed(result):
    assert result.passed, f"{result.name}: {result.detail}"


def test_bound_dominance():
    _assert_passed(check_bound_dominance(trials=500))


def test_corollary_coincidence():
    _assert_passed(check_corollary_coincidence())


def test_gap_shrinks_with_kappa():
    _assert_passed(check_gap_shrinks(trials=500))


def test_figure5_ordering():
    _assert_passed(check_figure5_ordering(trials=300))


def test_zf_nulling():
    result = check_zf_nulling(draws=100)
    _assert_passed(result)
    assert result.detail.startswith("100 draws")


def test_grid_recovery():
    result = check_grid_recovery(trials=100)
    _assert_passed(result)
    assert result.detail.startswith("100/100")


def test_ls_consistency():
    _assert_passed(check_ls_consistency(trials=100))


def test_trace_inverse():
    _assert_passed(check_trace_inverse(samples=1000))


def test_scatter_expectation():
    _assert_passed(check_scatter_expectation(draws=2000))


def test_determinism():
    _assert_passed(check_determinism(trials=4, seed=7, threads=4))


@pytest.mark.parametrize(
    ("seed", "trials"), [(None, 0), (-1, None), (2**64, None)]
)
def test_run_checks_rejects_bad_overrides(seed, trials):
    with pytest.raises(ConfigError):
        run_checks(seed=seed, trials=trials)


def test_run_checks_rejects_zero_threads():
    with pytest.raises(ConfigError, match="threads must be at least 1"):
        run_checks(threads=0)
