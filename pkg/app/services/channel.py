"""Rician mmWave channel synthesis: rank-one LOS plus i.i.d. or clustered scattering."""

import math

import numpy as np

from app.schemas.array import ArrayGeometry
from app.schemas.channel import ClusterConfig, ClusterPaths, RicianFactor, UserChannel
from app.schemas.types import ComplexMatrix
from app.services.array import check_angle, steering_vector
from app.services.exceptions import DimensionMismatchError


def los_channel(
    bs: ArrayGeometry, ue: ArrayGeometry, theta: float, phi: float
) -> ComplexMatrix:
    """Rank-one LOS matrix h_BS(theta) h_UE(phi)^H of shape M x P."""
    h_bs = steering_vector(bs, theta, -1)
    h_ue = steering_vector(ue, phi, -1)
    return np.outer(h_bs, h_ue.conj())


def scatter_iid(M: int, P: int, rng: np.random.Generator) -> ComplexMatrix:
    """M x P matrix of i.i.d. CN(0, 1) entries."""
    real = rng.standard_normal((M, P))
    imag = rng.standard_normal((M, P))
    return (real + 1j * imag) / math.sqrt(2.0)


def draw_cluster_paths(cfg: ClusterConfig, rng: np.random.Generator) -> ClusterPaths:
    """Draw cluster centers on both sides, per-path AoAs around them and path gains."""
    counts = np.asarray(cfg.paths_per_cluster)
    bs_centers = rng.uniform(0.0, np.pi, cfg.num_clusters)
    ue_centers = rng.uniform(0.0, np.pi, cfg.num_clusters)
    total = cfg.total_paths
    spread = cfg.cluster_angle_spread
    bs_angles = np.repeat(bs_centers, counts) + rng.normal(0.0, 1.0, total) * spread
    ue_angles = np.repeat(ue_centers, counts) + rng.normal(0.0, 1.0, total) * spread
    gains = (rng.standard_normal(total) + 1j * rng.standard_normal(total)) / math.sqrt(
        2.0
    )
    return ClusterPaths(
        bs_angles=np.clip(bs_angles, 0.0, np.pi),
        ue_angles=np.clip(ue_angles, 0.0, np.pi),
        gains=gains,
    )


def synthesize_paths(
    bs: ArrayGeometry, ue: ArrayGeometry, paths: ClusterPaths
) -> ComplexMatrix:
    """Sum of gain * h_BS h_UE^H over all paths, scaled by 1/sqrt(#paths)."""
    total = paths.gains.shape[0]
    m = np.arange(bs.num_elements)[:, np.newaxis]
    p = np.arange(ue.num_elements)[:, np.newaxis]
    h_bs = np.exp(
        -1j * 2.0 * np.pi * bs.spacing_ratio * m * np.cos(paths.bs_angles)[np.newaxis]
    )
    h_ue = np.exp(
        -1j * 2.0 * np.pi * ue.spacing_ratio * p * np.cos(paths.ue_angles)[np.newaxis]
    )
    return (h_bs * paths.gains[np.newaxis]) @ h_ue.conj().T / math.sqrt(total)


def scatter_clustered(
    bs: ArrayGeometry,
    ue: ArrayGeometry,
    cfg: ClusterConfig,
    rng: np.random.Generator,
) -> ComplexMatrix:
    return synthesize_paths(bs, ue, draw_cluster_paths(cfg, rng))


def assemble(user: UserChannel) -> ComplexMatrix:
    """Combined uplink channel H_k (M x P); the downlink channel is its transpose."""
    return (
        user.rician.los_weight * user.los + user.rician.scatter_weight * user.scatter
    )


def draw_user_channel(
    bs: ArrayGeometry,
    ue: ArrayGeometry,
    rician: RicianFactor,
    rng: np.random.Generator,
    cluster: ClusterConfig | None = None,
    theta: float | None = None,
    phi: float | None = None,
) -> UserChannel:
    """Draw one user's channel; LOS angles are uniform on [0, pi] unless given.

    ``cluster`` selects the clustered scattering model, otherwise i.i.d.
    """
    theta = check_angle(theta) if theta is not None else float(rng.uniform(0, np.pi))
    phi = check_angle(phi) if phi is not None else float(rng.uniform(0, np.pi))
    if cluster is None:
        scatter = scatter_iid(bs.num_elements, ue.num_elements, rng)
    else:
        scatter = scatter_clustered(bs, ue, cluster, rng)
    return UserChannel(
        los=los_channel(bs, ue, theta, phi),
        scatter=scatter,
        rician=rician,
        theta=theta,
        phi=phi,
    )


def check_users(users: list[UserChannel]) -> tuple[int, int]:
    """Validate a nonempty user list sharing one (M, P) and return it."""
    if not users:
        raise ValueError("at least one user channel is required")  # noqa: TRY003
    shape = users[0].los.shape
    for k, user in enumerate(users):
        if user.los.shape != shape:
            raise DimensionMismatchError(  # noqa: TRY003
                f"user {k} channel has shape {user.los.shape}, expected {shape}"
            )
    return int(shape[0]), int(shape[1])
