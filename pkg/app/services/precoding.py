"""ZF precoding, downlink SINR evaluation and the comparison baselines."""

import math
from collections.abc import Iterable, Sequence

import numpy as np
from scipy import linalg

from app.core.config import settings
from app.schemas.channel import UserChannel
from app.schemas.estimation import BeamformerSet
from app.schemas.precoding import LinkResult, Precoder
from app.schemas.types import ComplexMatrix
from app.services.channel import assemble, check_users
from app.services.estimation import true_equivalent_channel
from app.services.exceptions import DimensionMismatchError, SingularChannelError


def zf_precoder(h_eq: ComplexMatrix, condition_limit: float | None = None) -> Precoder:
    """W = H* (H^T H*)^-1 with beta = 1 / sqrt(trace(W W^H)).

    ``h_eq`` is R x N with R >= N: rows are BS RF chains (or antennas), columns
    users. Raises SingularChannelError when cond(H^T H*) exceeds the limit.
    """
    limit = settings.CONDITION_LIMIT if condition_limit is None else condition_limit
    h = np.asarray(h_eq, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] < h.shape[1]:
        raise DimensionMismatchError(  # noqa: TRY003
            f"ZF needs an R x N channel with R >= N, got shape {h.shape}"
        )
    singular_values = linalg.svdvals(h)
    smallest = singular_values[-1]
    # cond(H^T H*) is the squared condition number of H
    condition = math.inf if smallest == 0 else (singular_values[0] / smallest) ** 2
    if not condition <= limit:
        raise SingularChannelError(condition, limit)
    weights = linalg.pinv(h.T)
    beta = 1.0 / float(np.linalg.norm(weights))
    return Precoder(weights=weights, beta=beta)


def equal_power_precoder(N: int) -> Precoder:
    """Identity baseband precoder with equal power per stream."""
    return Precoder(weights=np.eye(N), beta=1.0 / math.sqrt(N))


def link_results(
    gains: ComplexMatrix, symbol_energy: float, noise_variance: float
) -> list[LinkResult]:
    """Row k of ``gains`` holds user k's received gain from every stream."""
    powers = np.abs(gains) ** 2 * symbol_energy
    streams = np.arange(powers.shape[1])
    results = []
    for k in range(powers.shape[0]):
        # sum the off-diagonal terms directly, not row total minus diagonal
        interference = float(powers[k, streams != k].sum())
        results.append(
            LinkResult(
                desired_power=float(powers[k, k]),
                interference_power=interference,
                noise_power=noise_variance,
                symbol_energy=symbol_energy,
            )
        )
    return results


def evaluate_downlink(
    users: list[UserChannel],
    beams: BeamformerSet,
    precoder: Precoder,
    symbol_energy: float,
    noise_variance: float,
) -> list[LinkResult]:
    """Per-user desired, interference and noise power after receive beamforming.

    User k sees g_j = omega_k^H H_k^T F_RF beta w_j through its true channel;
    unit-norm combining keeps the noise power at sigma^2.
    """
    h_eq = true_equivalent_channel(users, beams)
    if precoder.weights.shape != h_eq.shape:
        raise DimensionMismatchError(  # noqa: TRY003
            f"precoder shape {precoder.weights.shape} does not match "
            f"equivalent channel {h_eq.shape}"
        )
    gains = precoder.beta * (h_eq.T @ precoder.weights)
    return link_results(gains, symbol_energy, noise_variance)


def rate_per_user(trials: Iterable[Sequence[LinkResult]]) -> float:
    """Mean of log2(1 + SINR) over every user of every trial."""
    rates = [result.rate for trial in trials for result in trial]
    if not rates:
        raise ValueError("at least one trial result is required")  # noqa: TRY003
    return float(np.mean(rates))


def analog_only_baseline(
    users: list[UserChannel],
    beams: BeamformerSet,
    symbol_energy: float,
    noise_variance: float,
) -> list[LinkResult]:
    """Analog beam steering only: identity baseband precoder, equal power."""
    precoder = equal_power_precoder(beams.num_users)
    return evaluate_downlink(users, beams, precoder, symbol_energy, noise_variance)


def fully_digital_channel(users: list[UserChannel]) -> ComplexMatrix:
    """M x N effective channel of a fully digital BS with perfect CSI.

    Each user combines with the dominant left singular vector of H_k^T, so
    column k is the transpose of u_k^H H_k^T.
    """
    M, _ = check_users(users)
    effective = np.empty((M, len(users)), dtype=np.complex128)
    for k, user in enumerate(users):
        downlink = assemble(user).T
        left, _, _ = linalg.svd(downlink, full_matrices=False)
        effective[:, k] = left[:, 0].conj() @ downlink
    return effective


def fully_digital_baseline(
    users: list[UserChannel],
    symbol_energy: float,
    noise_variance: float,
) -> list[LinkResult]:
    """ZF over all M BS antennas with SVD receive combining at every user."""
    effective = fully_digital_channel(users)
    precoder = zf_precoder(effective)
    gains = precoder.beta * (effective.T @ precoder.weights)
    return link_results(gains, symbol_energy, noise_variance)
