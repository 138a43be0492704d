"""Uniform linear array responses and angular detection matrices."""

import math

import numpy as np

from app.schemas.array import AngleGrid, ArrayGeometry
from app.schemas.types import ComplexMatrix
from app.services.exceptions import InvalidAngleError


def check_angle(angle: float) -> float:
    if not math.isfinite(angle):
        raise InvalidAngleError(f"Angle {angle!r} is not finite")  # noqa: TRY003
    if not 0.0 <= angle <= math.pi:
        raise InvalidAngleError(f"Angle {angle!r} rad is outside [0, pi]")  # noqa: TRY003
    return angle


def steering_vector(
    geometry: ArrayGeometry, angle: float, phase_sign: int = -1
) -> ComplexMatrix:
    """Unnormalized array response; element m is exp(sign * j2pi m d/lambda cos)."""
    if phase_sign not in (1, -1):
        raise ValueError(f"phase_sign must be +1 or -1, got {phase_sign}")  # noqa: TRY003
    check_angle(angle)
    m = np.arange(geometry.num_elements)
    phase = 2.0 * np.pi * geometry.spacing_ratio * math.cos(angle)
    return np.exp(phase_sign * 1j * phase * m)


def detection_matrix(geometry: ArrayGeometry, grid: AngleGrid) -> ComplexMatrix:
    """num_elements x J matrix of unit-norm detection vectors, one per grid angle."""
    m = np.arange(geometry.num_elements)[:, np.newaxis]
    phase = 2.0 * np.pi * geometry.spacing_ratio * np.cos(grid.angles)[np.newaxis, :]
    matrix = np.exp(1j * phase * m) / math.sqrt(geometry.num_elements)
    matrix.setflags(write=False)
    return matrix
