"""Monte Carlo harness: channel draws, estimation, precoding and bounds over SNR."""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
from pydantic import ValidationError

from app.core.config import logger, settings
from app.schemas.array import AngleGrid, ArrayGeometry
from app.schemas.bounds import BoundInputs
from app.schemas.channel import ClusterConfig, RicianFactor, UserChannel
from app.schemas.estimation import BeamformerSet
from app.schemas.experiment import (
    BOUND_CURVES,
    CurveId,
    CurvePoint,
    EstimationMode,
    ExperimentConfig,
    ScatterMode,
)
from app.schemas.types import ComplexMatrix
from app.services.bounds import (
    corollary1_asymptotic,
    corollary2_fully_digital,
    theorem1_upper,
)
from app.services.channel import draw_user_channel
from app.services.estimation import EstimationService, true_equivalent_channel
from app.services.exceptions import (
    ConfigError,
    SingularChannelError,
    validation_messages,
)
from app.services.precoding import (
    analog_only_baseline,
    evaluate_downlink,
    fully_digital_baseline,
    rate_per_user,
    zf_precoder,
)

# Seed-sequence stream identifiers
CHANNEL_STREAM = 0
ESTIMATION_STREAM = 1

# Data-stage noise power; SNR is carried by E_s.
NOISE_VARIANCE = 1.0


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


class TrialOutcome:
    """Per-trial mean user rate for each curve and SNR point (None = outage)."""

    def __init__(self, curves: list[CurveId], num_points: int) -> None:
        self.rates: dict[CurveId, list[float | None]] = {
            curve: [None] * num_points for curve in curves
        }
        self.gram_norms: list[float] = [0.0] * num_points


class ExperimentService:
    def __init__(self, config: ExperimentConfig, threads: int | None = None) -> None:
        self.config = config
        self.threads = settings.resolve_threads(threads)
        spacing = config.spacing_ratio
        self.bs = ArrayGeometry(num_elements=config.M, spacing_ratio=spacing)
        self.ue = ArrayGeometry(num_elements=config.P, spacing_ratio=spacing)
        self.grid = AngleGrid(num_points=config.J)
        self.rician = RicianFactor(kappa=config.kappa)
        self.cluster: ClusterConfig | None = (
            config.cluster if config.scatter_mode is ScatterMode.CLUSTERED else None
        )
        self.estimation = EstimationService(self.bs, self.ue, self.grid)
        self.pilot_energy = db_to_linear(config.pilot_energy_db)
        self.rate_curves = [c for c in config.curves if c not in BOUND_CURVES]

    def trial_rng(self, trial: int, stream: int, index: int) -> np.random.Generator:
        seq = np.random.SeedSequence([self.config.master_seed, trial, stream, index])
        return np.random.default_rng(seq)

    def draw_users(self, trial: int) -> list[UserChannel]:
        """Draw all N user channels of one trial; user k has its own stream."""
        cfg = self.config
        users = []
        for k in range(cfg.N):
            users.append(
                draw_user_channel(
                    self.bs,
                    self.ue,
                    self.rician,
                    self.trial_rng(trial, CHANNEL_STREAM, k),
                    cluster=self.cluster,
                    theta=cfg.bs_angles[k] if cfg.bs_angles is not None else None,
                    phi=cfg.ue_angles[k] if cfg.ue_angles is not None else None,
                )
            )
        return users

    def estimation_reused(self) -> bool:
        """True when beams and H_eq do not depend on the data SNR point."""
        return (
            self.config.estimation is EstimationMode.PERFECT_FULL
            or self.config.estimation_snr_db is not None
        )

    def acquire_csi(
        self, users: list[UserChannel], trial: int, snr_index: int
    ) -> tuple[BeamformerSet, ComplexMatrix]:
        """Beams plus the equivalent channel the precoder is built from."""
        cfg = self.config
        if cfg.estimation_snr_db is not None:
            snr_index = 0
            estimation_snr_db = cfg.estimation_snr_db
        else:
            estimation_snr_db = cfg.snr_db_range[snr_index]
        noise_variance = 1.0 / db_to_linear(estimation_snr_db)
        rng = self.trial_rng(trial, ESTIMATION_STREAM, snr_index)

        if cfg.estimation is EstimationMode.PROPOSED:
            beams, channel = self.estimation.estimate(
                users, noise_variance, self.pilot_energy, rng
            )
            return beams, channel.estimate
        if cfg.estimation is EstimationMode.PERFECT_EQUIVALENT:
            beams = self.estimation.sweep(users, noise_variance, rng)
        else:
            beams = self.estimation.sweep(users, 0.0, rng)
        return beams, true_equivalent_channel(users, beams)

    def run_trial(self, trial: int) -> TrialOutcome:
        cfg = self.config
        outcome = TrialOutcome(self.rate_curves, len(cfg.snr_db_range))
        users = self.draw_users(trial)

        cached: tuple[BeamformerSet, ComplexMatrix] | None = None
        for i, snr_db in enumerate(cfg.snr_db_range):
            symbol_energy = db_to_linear(snr_db)
            if cached is None or not self.estimation_reused():
                cached = self.acquire_csi(users, trial, i)
            beams, h_hat = cached
            outcome.gram_norms[i] = beams.bs_gram_fro_sq()

            if CurveId.HYBRID_ZF in outcome.rates:
                try:
                    precoder = zf_precoder(h_hat)
                    results = evaluate_downlink(
                        users, beams, precoder, symbol_energy, NOISE_VARIANCE
                    )
                    outcome.rates[CurveId.HYBRID_ZF][i] = rate_per_user([results])
                except SingularChannelError as e:
                    logger.debug(
                        "Trial %d, %g dB: hybrid outage (%s)", trial, snr_db, e
                    )
            if CurveId.ANALOG_ONLY in outcome.rates:
                results = analog_only_baseline(
                    users, beams, symbol_energy, NOISE_VARIANCE
                )
                outcome.rates[CurveId.ANALOG_ONLY][i] = rate_per_user([results])
            if CurveId.FULLY_DIGITAL in outcome.rates:
                try:
                    results = fully_digital_baseline(
                        users, symbol_energy, NOISE_VARIANCE
                    )
                    outcome.rates[CurveId.FULLY_DIGITAL][i] = rate_per_user([results])
                except SingularChannelError as e:
                    logger.debug(
                        "Trial %d, %g dB: fully digital outage (%s)", trial, snr_db, e
                    )
        return outcome

    def run(self) -> list[CurvePoint]:
        cfg = self.config
        logger.info(
            "Running %d trials (M=%d, N=%d, P=%d, kappa=%g, %s, %s) on %d threads",
            cfg.trials,
            cfg.M,
            cfg.N,
            cfg.P,
            cfg.kappa,
            cfg.scatter_mode.value,
            cfg.estimation.value,
            self.threads,
        )
        started = time.perf_counter()
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            # map yields in trial order, so aggregation is schedule independent
            outcomes = list(executor.map(self.run_trial, range(cfg.trials)))
        points = self._aggregate(outcomes)
        logger.info(
            "Finished %d trials in %.2f s", cfg.trials, time.perf_counter() - started
        )
        return points

    def _aggregate(self, outcomes: list[TrialOutcome]) -> list[CurvePoint]:
        cfg = self.config
        points: list[CurvePoint] = []
        for curve in cfg.curves:
            for i, snr_db in enumerate(cfg.snr_db_range):
                if curve in BOUND_CURVES:
                    gram = float(np.mean([o.gram_norms[i] for o in outcomes]))
                    points.append(self._bound_point(curve, snr_db, gram))
                    continue
                samples = [o.rates[curve][i] for o in outcomes]
                values = np.array([v for v in samples if v is not None])
                outages = len(samples) - values.size
                if outages:
                    logger.warning(
                        "%s at %g dB: %d of %d trials were outages",
                        curve.value,
                        snr_db,
                        outages,
                        len(samples),
                    )
                points.append(
                    CurvePoint(
                        curve_id=curve,
                        snr_db=snr_db,
                        mean_rate=float(values.mean()) if values.size else math.nan,
                        std_err=_std_err(values),
                        trials_used=int(values.size),
                        outages=outages,
                    )
                )
        return points

    def _bound_point(self, curve: CurveId, snr_db: float, gram: float) -> CurvePoint:
        cfg = self.config
        inputs = BoundInputs(
            M=cfg.M,
            P=cfg.P,
            N=cfg.N,
            kappa=cfg.kappa,
            snr=db_to_linear(snr_db),
            frf_gram_fro_sq=max(gram, float(cfg.N)),
        )
        bound = {
            CurveId.BOUND_THM1: theorem1_upper,
            CurveId.BOUND_COR1: corollary1_asymptotic,
            CurveId.BOUND_COR2: corollary2_fully_digital,
        }[curve]
        return CurvePoint(
            curve_id=curve,
            snr_db=snr_db,
            mean_rate=bound(inputs),
            std_err=0.0,
            trials_used=cfg.trials,
            outages=0,
        )


def _std_err(values: np.ndarray[Any, Any]) -> float:
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


def run_experiment(
    config: ExperimentConfig, threads: int | None = None
) -> list[CurvePoint]:
    return ExperimentService(config, threads).run()


def with_overrides(
    config: ExperimentConfig,
    *,
    seed: int | None = None,
    trials: int | None = None,
) -> ExperimentConfig:
    """Copy of ``config`` with CLI overrides applied and re-validated."""
    data = config.model_dump()
    if seed is not None:
        data["master_seed"] = seed
    if trials is not None:
        data["trials"] = trials
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(validation_messages(e)) from e


FIGURE4_CURVES = [
    CurveId.HYBRID_ZF,
    CurveId.FULLY_DIGITAL,
    CurveId.BOUND_THM1,
    CurveId.BOUND_COR1,
    CurveId.BOUND_COR2,
]


def figure4_config() -> ExperimentConfig:
    """Hybrid vs fully digital, M=100, N=10, kappa=2, i.i.d. scattering."""
    return ExperimentConfig(
        M=100,
        N=10,
        P=1,
        kappa=2.0,
        scatter_mode=ScatterMode.IID,
        estimation=EstimationMode.PROPOSED,
        curves=FIGURE4_CURVES,
    )


def figure5_config() -> ExperimentConfig:
    """Hybrid ZF vs analog-only steering, M=100, N=4, P=16, kappa=1, 8 paths."""
    return ExperimentConfig(
        M=100,
        N=4,
        P=16,
        kappa=1.0,
        scatter_mode=ScatterMode.CLUSTERED,
        cluster=ClusterConfig(num_clusters=8, paths_per_cluster=[1] * 8),
        estimation=EstimationMode.PERFECT_FULL,
        curves=[CurveId.HYBRID_ZF, CurveId.ANALOG_ONLY],
    )


def figure5_sparse_config() -> ExperimentConfig:
    """Figure-5 geometry over a sparse single-path channel (no separate LOS)."""
    return ExperimentConfig(
        M=100,
        N=4,
        P=16,
        kappa=0.0,
        scatter_mode=ScatterMode.CLUSTERED,
        cluster=ClusterConfig(num_clusters=1, paths_per_cluster=[1]),
        estimation=EstimationMode.PERFECT_FULL,
        curves=[CurveId.HYBRID_ZF, CurveId.ANALOG_ONLY],
    )


def quick_config() -> ExperimentConfig:
    """Desk-scale preset for fast runs."""
    return ExperimentConfig(
        M=64,
        N=4,
        P=8,
        kappa=2.0,
        scatter_mode=ScatterMode.IID,
        estimation=EstimationMode.PROPOSED,
        curves=[CurveId.HYBRID_ZF, CurveId.ANALOG_ONLY, *FIGURE4_CURVES[1:]],
    )
