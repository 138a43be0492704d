"""Property and oracle checks run by ``hybridmimo check``.

Each check builds its own small scenario, runs it and reports a CheckResult;
none of them raise on a failed property.
"""

import math
from collections.abc import Callable
from functools import partial

import numpy as np

from app.core.config import logger, settings
from app.schemas.array import AngleGrid, ArrayGeometry
from app.schemas.bounds import BoundInputs
from app.schemas.channel import RicianFactor
from app.schemas.checks import CheckResult
from app.schemas.experiment import (
    MAX_SEED,
    CurveId,
    CurvePoint,
    EstimationMode,
    ExperimentConfig,
    ScatterMode,
)
from app.services.bounds import (
    corollary1_asymptotic,
    corollary2_fully_digital,
    theorem1_realized,
    trace_inverse_bound_check,
)
from app.services.channel import draw_user_channel
from app.services.estimation import (
    EstimationService,
    los_matched_beams,
    true_equivalent_channel,
)
from app.services.exceptions import ConfigError, SingularChannelError
from app.services.experiment import (
    ESTIMATION_STREAM,
    NOISE_VARIANCE,
    ExperimentService,
    db_to_linear,
    figure4_config,
    figure5_config,
    run_experiment,
    with_overrides,
)
from app.services.precoding import evaluate_downlink, zf_precoder
from app.services.results import format_curves

SNR_GRID_DB = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]
BOUND_SLACK = 1e-9
NEAR_LOS_KAPPA = 1e9


def _points_by_curve(
    points: list[CurvePoint],
) -> dict[CurveId, dict[float, CurvePoint]]:
    table: dict[CurveId, dict[float, CurvePoint]] = {}
    for point in points:
        table.setdefault(point.curve_id, {})[point.snr_db] = point
    return table


def check_bound_dominance(
    trials: int = 500, seed: int = 0, threads: int | None = None
) -> CheckResult:
    """Hybrid ZF rate never exceeds the hybrid bound.

    Per trial against the realized-norm form, and on trial means against the
    expectation form with the averaged F_RF Gram norm.
    """
    config = ExperimentConfig(
        M=64,
        N=4,
        P=8,
        kappa=2.0,
        scatter_mode=ScatterMode.IID,
        estimation=EstimationMode.PERFECT_EQUIVALENT,
        snr_db_range=SNR_GRID_DB,
        trials=trials,
        master_seed=seed,
        curves=[CurveId.HYBRID_ZF, CurveId.BOUND_THM1],
    )
    service = ExperimentService(config, threads)
    violations = 0
    worst = -math.inf
    for trial in range(trials):
        users = service.draw_users(trial)
        for i, snr_db in enumerate(config.snr_db_range):
            beams, h_eq = service.acquire_csi(users, trial, i)
            try:
                precoder = zf_precoder(h_eq)
            except SingularChannelError:
                continue
            snr = db_to_linear(snr_db)
            results = evaluate_downlink(users, beams, precoder, snr, NOISE_VARIANCE)
            rate = float(np.mean([r.rate for r in results]))
            excess = rate - theorem1_realized(h_eq, snr / NOISE_VARIANCE)
            worst = max(worst, excess)
            if excess > BOUND_SLACK:
                violations += 1

    table = _points_by_curve(service.run())
    bound = table[CurveId.BOUND_THM1]
    mean_violations = [
        snr_db
        for snr_db, point in table[CurveId.HYBRID_ZF].items()
        if point.trials_used
        and point.mean_rate > bound[snr_db].mean_rate + BOUND_SLACK
    ]
    return CheckResult(
        name="bound dominance",
        passed=violations == 0 and not mean_violations,
        detail=(
            f"{violations} per-trial violations (largest excess {worst:.3g}); "
            f"mean above bound at {mean_violations or 'no'} dB"
        ),
    )


def check_corollary_coincidence() -> CheckResult:
    """Hybrid and fully digital large-M bounds meet as the LOS share goes to one."""
    worst = 0.0
    for snr_db in SNR_GRID_DB:
        inputs = BoundInputs(
            M=100,
            N=10,
            P=1,
            kappa=NEAR_LOS_KAPPA,
            snr=db_to_linear(snr_db),
            frf_gram_fro_sq=10.0,
        )
        gap = abs(corollary1_asymptotic(inputs) - corollary2_fully_digital(inputs))
        worst = max(worst, gap)
    return CheckResult(
        name="corollary coincidence",
        passed=worst < 1e-3,
        detail=f"largest gap {worst:.3g} bits/s/Hz",
    )


def _digital_gap(
    kappa: float, trials: int, seed: int, threads: int | None
) -> tuple[float, float]:
    config = ExperimentConfig(
        M=100,
        N=10,
        P=1,
        kappa=kappa,
        scatter_mode=ScatterMode.IID,
        estimation=EstimationMode.PROPOSED,
        snr_db_range=[10.0],
        trials=trials,
        master_seed=seed,
        curves=[CurveId.HYBRID_ZF, CurveId.FULLY_DIGITAL],
    )
    table = _points_by_curve(run_experiment(config, threads))
    hybrid = table[CurveId.HYBRID_ZF][10.0]
    digital = table[CurveId.FULLY_DIGITAL][10.0]
    gap = digital.mean_rate - hybrid.mean_rate
    return gap, digital.std_err**2 + hybrid.std_err**2


def check_gap_shrinks(
    trials: int = 500, seed: int = 0, threads: int | None = None
) -> CheckResult:
    """The fully digital advantage at 10 dB is smaller at kappa=10 than at kappa=1."""
    gap_low, var_low = _digital_gap(1.0, trials, seed, threads)
    gap_high, var_high = _digital_gap(10.0, trials, seed, threads)
    margin = 2.0 * math.sqrt(var_low + var_high)
    return CheckResult(
        name="gap shrinks with kappa",
        passed=gap_low - gap_high > margin,
        detail=(
            f"gap {gap_low:.3f} at kappa=1, {gap_high:.3f} at kappa=10 "
            f"(two-sigma {margin:.3f})"
        ),
    )


def check_figure5_ordering(
    trials: int = 300, seed: int = 0, threads: int | None = None
) -> CheckResult:
    """Hybrid ZF beats analog-only steering by two standard errors at SNR >= 0 dB."""
    config = with_overrides(figure5_config(), seed=seed, trials=trials)
    table = _points_by_curve(run_experiment(config, threads))
    failing = []
    for snr_db, hybrid in table[CurveId.HYBRID_ZF].items():
        if snr_db < 0:
            continue
        analog = table[CurveId.ANALOG_ONLY][snr_db]
        margin = 2.0 * math.sqrt(hybrid.std_err**2 + analog.std_err**2)
        if not hybrid.mean_rate - analog.mean_rate >= margin:
            failing.append(snr_db)
    return CheckResult(
        name="hybrid beats analog-only",
        passed=not failing,
        detail=f"ordering fails at {failing} dB" if failing else "all points ordered",
    )


def check_zf_nulling(draws: int = 100, seed: int = 0) -> CheckResult:
    """ZF from the exact H_eq leaves interference below 1e-20 of the desired power."""
    config = ExperimentConfig(M=64, N=4, P=8, kappa=2.0, trials=1, master_seed=seed)
    service = ExperimentService(config, threads=1)
    accepted = 0
    worst = 0.0
    trial = 0
    while accepted < draws and trial < 10 * draws:
        users = service.draw_users(trial)
        rng = service.trial_rng(trial, ESTIMATION_STREAM, 0)
        beams = service.estimation.sweep(users, 0.0, rng)
        trial += 1
        try:
            precoder = zf_precoder(true_equivalent_channel(users, beams))
        except SingularChannelError:
            continue
        for result in evaluate_downlink(users, beams, precoder, 1.0, NOISE_VARIANCE):
            worst = max(worst, result.interference_power / result.desired_power)
        accepted += 1
    return CheckResult(
        name="ZF nulling",
        passed=accepted == draws and worst < 1e-20,
        detail=f"{accepted} draws, largest interference ratio {worst:.3g}",
    )


def check_grid_recovery(trials: int = 100, seed: int = 0) -> CheckResult:
    """Noiseless sweeps recover on-grid LOS angles exactly at near-pure LOS."""
    bs = ArrayGeometry(num_elements=32)
    ue = ArrayGeometry(num_elements=8)
    grid = AngleGrid(num_points=180)
    rician = RicianFactor(kappa=NEAR_LOS_KAPPA)
    service = EstimationService(bs, ue, grid)
    num_users = 4
    candidates = np.arange(grid.num_points)
    recovered = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        bs_idx = rng.choice(candidates, size=num_users, replace=False)
        ue_idx = rng.choice(candidates, size=num_users, replace=False)
        users = [
            draw_user_channel(
                bs,
                ue,
                rician,
                rng,
                theta=float(grid.angles[b]),
                phi=float(grid.angles[u]),
            )
            for b, u in zip(bs_idx, ue_idx, strict=True)
        ]
        beams = service.sweep(users, 0.0, rng)
        if beams.bs_aoa_indices == tuple(int(b) for b in bs_idx) and (
            beams.ue_aoa_indices == tuple(int(u) for u in ue_idx)
        ):
            recovered += 1
    return CheckResult(
        name="on-grid AoA recovery",
        passed=recovered == trials,
        detail=f"{recovered}/{trials} trials recovered every index",
    )


def check_ls_consistency(trials: int = 100, seed: int = 0) -> CheckResult:
    """LS estimate is within 1% of H_eq when E_P / sigma^2 = 1e6."""
    config = ExperimentConfig(M=64, N=4, P=8, kappa=2.0, trials=1, master_seed=seed)
    service = ExperimentService(config, threads=1)
    errors = []
    for trial in range(trials):
        users = service.draw_users(trial)
        _, channel = service.estimation.estimate(
            users, 1e-6, 1.0, service.trial_rng(trial, ESTIMATION_STREAM, 0)
        )
        errors.append(channel.estimation_error)
    mean_error = float(np.mean(errors))
    return CheckResult(
        name="LS consistency",
        passed=mean_error < 1e-2,
        detail=f"mean relative error {mean_error:.3g}",
    )


def check_trace_inverse(samples: int = 1000, seed: int = 0) -> CheckResult:
    """1 / trace(A^-1) <= trace(A) / N^2 for random Hermitian PD A, equal at c I."""
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(samples):
        N = int(rng.integers(2, 17))
        b = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        a = b @ b.conj().T + 1e-6 * np.eye(N)
        holds, _, _ = trace_inverse_bound_check((a + a.conj().T) / 2.0)
        if not holds:
            violations += 1
    equality_gap = 0.0
    for N in range(2, 17):
        c = float(rng.uniform(0.1, 10.0))
        _, left, right = trace_inverse_bound_check(c * np.eye(N))
        equality_gap = max(equality_gap, abs(left - right) / right)
    return CheckResult(
        name="trace-inverse inequality",
        passed=violations == 0 and equality_gap < 1e-12,
        detail=(
            f"{violations}/{samples} violations, "
            f"equality case relative gap {equality_gap:.3g}"
        ),
    )


def check_scatter_expectation(draws: int = 2000, seed: int = 0) -> CheckResult:
    """With kappa=0 and beams chosen blind to the scattering, E||H_eq||^2 = N^2."""
    config = ExperimentConfig(M=64, N=4, P=8, kappa=0.0, trials=1, master_seed=seed)
    service = ExperimentService(config, threads=1)
    norms = []
    for trial in range(draws):
        users = service.draw_users(trial)
        beams = los_matched_beams(users, service.bs, service.ue, service.grid)
        h_eq = true_equivalent_channel(users, beams)
        norms.append(float(np.sum(np.abs(h_eq) ** 2)))
    target = config.N**2
    deviation = abs(float(np.mean(norms)) - target) / target
    return CheckResult(
        name="scatter-term expectation",
        passed=deviation < 0.05,
        detail=f"mean ||H_eq||^2 off N^2 by {deviation:.2%}",
    )


def check_determinism(
    trials: int = 500, seed: int = 7, threads: int | None = None
) -> CheckResult:
    """Two figure-4 runs with one seed serialize to identical CSV text."""
    config = with_overrides(figure4_config(), seed=seed, trials=trials)
    serial = format_curves(run_experiment(config, threads=1))
    pooled = format_curves(run_experiment(config, threads))
    return CheckResult(
        name="determinism",
        passed=serial == pooled,
        detail=f"seed {seed}, {trials} trials, serial vs pooled run",
    )


def run_checks(
    seed: int | None = None, trials: int | None = None, threads: int | None = None
) -> list[CheckResult]:
    """Run every check; ``trials`` replaces each check's own trial count."""
    if trials is not None and trials < 1:
        raise ConfigError(["trials must be at least 1"])
    if seed is not None and not 0 <= seed <= MAX_SEED:
        raise ConfigError([f"seed must lie in [0, {MAX_SEED}]"])
    if threads is not None:
        settings.resolve_threads(threads)

    def count(default: int) -> int:
        return default if trials is None else trials

    base = 0 if seed is None else seed
    checks: list[Callable[[], CheckResult]] = [
        partial(check_bound_dominance, count(500), base, threads),
        check_corollary_coincidence,
        partial(check_gap_shrinks, count(500), base, threads),
        partial(check_figure5_ordering, count(300), base, threads),
        partial(check_zf_nulling, count(100), base),
        partial(check_grid_recovery, count(100), base),
        partial(check_ls_consistency, count(100), base),
        partial(check_trace_inverse, count(1000), base),
        partial(check_scatter_expectation, count(2000), base),
        partial(check_determinism, count(500), 7 if seed is None else seed, threads),
    ]
    results = []
    for check in checks:
        result = check()
        if result.passed:
            logger.info("Check passed: %s", result.name)
        else:
            logger.warning("Check failed: %s (%s)", result.name, result.detail)
        results.append(result)
    return results
