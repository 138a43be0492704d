"""Closed-form achievable-rate bounds for hybrid and fully digital ZF."""

import math

import numpy as np
from scipy import linalg

from app.schemas.bounds import BoundInputs
from app.schemas.types import ComplexMatrix
from app.services.exceptions import NotPositiveDefiniteError


def _los_share(kappa: float) -> float:
    return 1.0 if math.isinf(kappa) else kappa / (kappa + 1.0)


def theorem1_upper(inputs: BoundInputs) -> float:
    """Upper bound on the hybrid ZF rate per user for a given F_RF Gram norm."""
    los = _los_share(inputs.kappa)
    n_sq = inputs.N**2
    gain = (
        los * inputs.M * inputs.P * inputs.frf_gram_fro_sq + (1.0 - los) * n_sq
    ) / n_sq
    return math.log2(1.0 + gain * inputs.snr)


def corollary1_asymptotic(inputs: BoundInputs) -> float:
    """Large-M limit of the hybrid bound (F_RF^H F_RF -> I_N)."""
    los = _los_share(inputs.kappa)
    gain = inputs.M * inputs.P / inputs.N * los + (1.0 - los)
    return math.log2(1.0 + gain * inputs.snr)


def corollary2_fully_digital(inputs: BoundInputs) -> float:
    """Large-M bound of the fully digital system, log2(1 + MP/N * snr)."""
    return math.log2(1.0 + inputs.M * inputs.P / inputs.N * inputs.snr)


def theorem1_realized(h_eq: ComplexMatrix, snr: float) -> float:
    """Hybrid bound with E||H_eq||_F^2 replaced by the realized norm.

    Always at least the per-realization ZF rate log2(1 + beta^2 snr).
    """
    N = h_eq.shape[1]
    fro_sq = float(np.sum(np.abs(h_eq) ** 2))
    return math.log2(1.0 + fro_sq / N**2 * snr)


def trace_inverse_bound_check(a: ComplexMatrix) -> tuple[bool, float, float]:
    """Check 1/trace(A^-1) <= trace(A)/N^2 for Hermitian positive definite A.

    Returns (holds, left, right).
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotPositiveDefiniteError("matrix must be square")  # noqa: TRY003
    scale = max(float(np.max(np.abs(a))), 1.0)
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12 * scale):
        raise NotPositiveDefiniteError("matrix is not Hermitian")  # noqa: TRY003
    eigenvalues = linalg.eigvalsh(a)
    if eigenvalues[0] <= 0:
        raise NotPositiveDefiniteError(  # noqa: TRY003
            "matrix is not positive definite "
            f"(smallest eigenvalue {eigenvalues[0]:.3g})"
        )
    N = a.shape[0]
    left = 1.0 / float(np.sum(1.0 / eigenvalues))
    right = float(np.sum(eigenvalues)) / N**2
    return left <= right * (1.0 + 1e-12), left, right
