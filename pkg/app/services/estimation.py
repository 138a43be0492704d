"""Three-step hybrid channel estimation.

Step 1 sweeps the BS detection grid against one uplink tone per user and keeps
the strongest direction as that user's BS beam. Step 2 sweeps each user's grid
against the downlink signal sent through its BS beam. Step 3 estimates the
N x N equivalent channel by least squares from N orthogonal pilot slots.

Carrier tones and LO mixing are not simulated: each tone observation is its
baseband projection. Users are separated by their tones, so the sweeps see no
inter-user interference.
"""

import math

import numpy as np

from app.core.config import logger
from app.schemas.array import AngleGrid, ArrayGeometry
from app.schemas.channel import UserChannel
from app.schemas.estimation import (
    BeamformerSet,
    EquivalentChannel,
    PilotMatrix,
    SweepResult,
)
from app.schemas.types import ComplexMatrix
from app.services.array import detection_matrix
from app.services.channel import assemble, check_users
from app.services.exceptions import DimensionMismatchError

# User antenna that emits the uplink tone in Step 1.
TONE_ANTENNA = 0


def _complex_noise(
    rng: np.random.Generator, shape: int | tuple[int, ...], variance: float
) -> ComplexMatrix:
    if variance == 0:
        return np.zeros(shape, dtype=np.complex128)
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def _check_sweep_inputs(grid_matrix: ComplexMatrix, num_elements: int) -> None:
    if grid_matrix.ndim != 2 or grid_matrix.shape[1] < 1:
        raise ValueError("detection grid must have at least one column (J >= 1)")  # noqa: TRY003
    if grid_matrix.shape[0] != num_elements:
        raise DimensionMismatchError(  # noqa: TRY003
            f"detection grid has {grid_matrix.shape[0]} rows, "
            f"array has {num_elements} elements"
        )


def step1_uplink_aoa(
    users: list[UserChannel],
    bs_grid_matrix: ComplexMatrix,
    noise_variance: float,
    rng: np.random.Generator,
) -> SweepResult:
    """Pick each user's BS beam as the grid column with the largest |gamma^T y|.

    Every direction carries its own noise sample; a unit-norm column projects
    CN(0, sigma^2 I) noise to a single CN(0, sigma^2) value, drawn directly.
    """
    M, _ = check_users(users)
    _check_sweep_inputs(bs_grid_matrix, M)
    J = bs_grid_matrix.shape[1]
    beams = np.empty((M, len(users)), dtype=np.complex128)
    indices: list[int] = []
    for k, user in enumerate(users):
        tone = (
            user.rician.los_weight * user.los[:, TONE_ANTENNA]
            + user.rician.scatter_weight * user.scatter[:, TONE_ANTENNA]
        )
        response = bs_grid_matrix.T @ tone + _complex_noise(rng, J, noise_variance)
        # argmax keeps the lowest index on ties
        best = int(np.argmax(np.abs(response)))
        beams[:, k] = bs_grid_matrix[:, best]
        indices.append(best)
    logger.debug("Step 1 selected BS grid indices %s", indices)
    return SweepResult(beams=beams, indices=tuple(indices))


def step2_downlink_aoa(
    users: list[UserChannel],
    bs_beams: ComplexMatrix,
    ue_grid_matrix: ComplexMatrix,
    noise_variance: float,
    rng: np.random.Generator,
) -> SweepResult:
    """Pick each user's receive beam by sweeping its grid against H_k^T gamma_k.

    The returned beams are the conjugated detection columns (columns of Q_RF).
    """
    _, P = check_users(users)
    _check_sweep_inputs(ue_grid_matrix, P)
    if bs_beams.shape[1] != len(users):
        raise DimensionMismatchError(  # noqa: TRY003
            f"{bs_beams.shape[1]} BS beams for {len(users)} users"
        )
    J = ue_grid_matrix.shape[1]
    beams = np.empty((P, len(users)), dtype=np.complex128)
    indices: list[int] = []
    for k, user in enumerate(users):
        downlink = assemble(user).T @ bs_beams[:, k]
        response = ue_grid_matrix.conj().T @ downlink + _complex_noise(
            rng, J, noise_variance
        )
        best = int(np.argmax(np.abs(response)))
        beams[:, k] = ue_grid_matrix[:, best].conj()
        indices.append(best)
    logger.debug("Step 2 selected user grid indices %s", indices)
    return SweepResult(beams=beams, indices=tuple(indices))


def make_pilots(N: int, pilot_energy: float) -> PilotMatrix:
    """sqrt(E_P) times the unitary N-point DFT matrix."""
    if N < 1:
        raise ValueError("at least one pilot sequence is required")  # noqa: TRY003
    if pilot_energy <= 0:
        raise ValueError("pilot energy must be positive")  # noqa: TRY003
    n = np.arange(N)
    unitary = np.exp(-2j * np.pi * np.outer(n, n) / N) / math.sqrt(N)
    return PilotMatrix(
        symbols=math.sqrt(pilot_energy) * unitary, pilot_energy=pilot_energy
    )


def true_equivalent_channel(
    users: list[UserChannel], beams: BeamformerSet
) -> ComplexMatrix:
    """H_eq with entry (j, k) = omega_k^H H_k^T gamma_j.

    Row k of the transpose is user k's downlink row omega_k^H H_k^T F_RF.
    """
    check_users(users)
    if beams.num_users != len(users):
        raise DimensionMismatchError(  # noqa: TRY003
            f"{beams.num_users} beam pairs for {len(users)} users"
        )
    h_eq = np.empty((beams.num_users, beams.num_users), dtype=np.complex128)
    for k, user in enumerate(users):
        h_eq[:, k] = beams.bs_beams.T @ (assemble(user) @ beams.ue_beams[:, k])
    return h_eq


def step3_ls_estimate(
    users: list[UserChannel],
    beams: BeamformerSet,
    pilots: PilotMatrix,
    noise_variance: float,
    rng: np.random.Generator,
) -> EquivalentChannel:
    """Least-squares estimate of H_eq from one pilot block of N symbol slots.

    Received block S = Psi H_eq^T + Z^T F_RF with Z ~ CN(0, sigma^2) per antenna
    and slot; the estimate Psi^H S / E_P carries noise of variance sigma^2 / E_P.
    """
    h_eq = true_equivalent_channel(users, beams)
    N = beams.num_users
    if pilots.num_users != N:
        raise DimensionMismatchError(  # noqa: TRY003
            f"pilot matrix serves {pilots.num_users} users, expected N={N}"
        )
    M = beams.bs_beams.shape[0]
    antenna_noise = _complex_noise(rng, (M, N), noise_variance)
    received = pilots.symbols @ h_eq.T + antenna_noise.T @ beams.bs_beams
    estimate_t = pilots.symbols.conj().T @ received / pilots.pilot_energy
    return EquivalentChannel(
        true_matrix=h_eq, estimate=estimate_t.T, noise_variance=noise_variance
    )


def los_matched_beams(
    users: list[UserChannel],
    bs: ArrayGeometry,
    ue: ArrayGeometry,
    grid: AngleGrid,
) -> BeamformerSet:
    """Grid beams nearest the true LOS AoAs, chosen without seeing the scattering."""
    check_users(users)
    bs_matrix = detection_matrix(bs, grid)
    ue_matrix = detection_matrix(ue, grid)
    bs_idx = [grid.nearest_index(user.theta) for user in users]
    ue_idx = [grid.nearest_index(user.phi) for user in users]
    return BeamformerSet(
        bs_beams=bs_matrix[:, bs_idx],
        ue_beams=ue_matrix[:, ue_idx].conj(),
        bs_aoa_indices=tuple(bs_idx),
        ue_aoa_indices=tuple(ue_idx),
    )


class EstimationService:
    """Runs the estimation steps for one array pair and one detection grid."""

    def __init__(self, bs: ArrayGeometry, ue: ArrayGeometry, grid: AngleGrid):
        self.bs = bs
        self.ue = ue
        self.grid = grid
        self.bs_grid_matrix = detection_matrix(bs, grid)
        self.ue_grid_matrix = detection_matrix(ue, grid)

    def sweep(
        self,
        users: list[UserChannel],
        noise_variance: float,
        rng: np.random.Generator,
    ) -> BeamformerSet:
        """Steps 1 and 2."""
        bs_side = step1_uplink_aoa(users, self.bs_grid_matrix, noise_variance, rng)
        ue_side = step2_downlink_aoa(
            users, bs_side.beams, self.ue_grid_matrix, noise_variance, rng
        )
        return BeamformerSet.from_sweeps(bs_side, ue_side)

    def estimate(
        self,
        users: list[UserChannel],
        noise_variance: float,
        pilot_energy: float,
        rng: np.random.Generator,
    ) -> tuple[BeamformerSet, EquivalentChannel]:
        """All three steps: the swept beams and the LS equivalent-channel estimate."""
        beams = self.sweep(users, noise_variance, rng)
        pilots = make_pilots(len(users), pilot_energy)
        return beams, step3_ls_estimate(users, beams, pilots, noise_variance, rng)
