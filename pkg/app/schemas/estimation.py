import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.types import ARRAY_MODEL_CONFIG, ComplexArray

_NORM_TOLERANCE = 1e-9


def _check_unit_columns(beams: ComplexArray, name: str) -> ComplexArray:
    if beams.ndim != 2:
        raise ValueError(f"{name} must be a matrix")  # noqa: TRY003
    norms = np.linalg.norm(beams, axis=0)
    if not np.allclose(norms, 1.0, atol=_NORM_TOLERANCE):
        raise ValueError(f"every column of {name} must have unit norm")  # noqa: TRY003
    return beams


class SweepResult(BaseModel):
    """Outcome of one AoA sweep: the selected beam per user and its grid index."""

    model_config = ARRAY_MODEL_CONFIG

    beams: ComplexArray
    indices: tuple[int, ...]

    @field_validator("beams")
    @classmethod
    def check_beams(cls, v: ComplexArray) -> ComplexArray:
        return _check_unit_columns(v, "beams")

    @model_validator(mode="after")
    def check_count(self) -> "SweepResult":
        if self.beams.shape[1] != len(self.indices):
            raise ValueError("one grid index is required per beam column")  # noqa: TRY003
        return self


class BeamformerSet(BaseModel):
    """Analog beamformers: F_RF at the BS (M x N) and Q_RF at the users (P x N).

    Column k of ``ue_beams`` is the conjugate of user k's selected detection
    column, so user k combines with ``ue_beams[:, k]`` applied to H_k.
    """

    model_config = ARRAY_MODEL_CONFIG

    bs_beams: ComplexArray
    ue_beams: ComplexArray
    bs_aoa_indices: tuple[int, ...]
    ue_aoa_indices: tuple[int, ...]

    @field_validator("bs_beams")
    @classmethod
    def check_bs_beams(cls, v: ComplexArray) -> ComplexArray:
        return _check_unit_columns(v, "bs_beams")

    @field_validator("ue_beams")
    @classmethod
    def check_ue_beams(cls, v: ComplexArray) -> ComplexArray:
        return _check_unit_columns(v, "ue_beams")

    @model_validator(mode="after")
    def check_counts(self) -> "BeamformerSet":
        n = self.bs_beams.shape[1]
        if (
            self.ue_beams.shape[1] != n
            or len(self.bs_aoa_indices) != n
            or len(self.ue_aoa_indices) != n
        ):
            raise ValueError("BS and user beamformers must cover the same N users")  # noqa: TRY003
        return self

    @classmethod
    def from_sweeps(cls, bs: SweepResult, ue: SweepResult) -> "BeamformerSet":
        return cls(
            bs_beams=bs.beams,
            ue_beams=ue.beams,
            bs_aoa_indices=bs.indices,
            ue_aoa_indices=ue.indices,
        )

    @property
    def num_users(self) -> int:
        return int(self.bs_beams.shape[1])

    def bs_gram_fro_sq(self) -> float:
        """Squared Frobenius norm of F_RF^H F_RF."""
        gram = self.bs_beams.conj().T @ self.bs_beams
        return float(np.sum(np.abs(gram) ** 2))


class PilotMatrix(BaseModel):
    """Orthogonal pilots; column i is user i's sequence, row n is symbol slot n."""

    model_config = ARRAY_MODEL_CONFIG

    symbols: ComplexArray
    pilot_energy: float = Field(gt=0)

    @model_validator(mode="after")
    def check_orthogonality(self) -> "PilotMatrix":
        s = self.symbols
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("pilot symbols must form a square N x N matrix")  # noqa: TRY003
        gram = s.conj().T @ s
        target = self.pilot_energy * np.eye(s.shape[0])
        if np.linalg.norm(gram - target) > 1e-12 * self.pilot_energy * s.shape[0]:
            raise ValueError("pilot sequences are not orthogonal with energy E_P")  # noqa: TRY003
        return self

    @property
    def num_users(self) -> int:
        return int(self.symbols.shape[1])


class EquivalentChannel(BaseModel):
    """Baseband channel H_eq seen through both analog beamformers, and its estimate.

    Entry (j, k) of ``true_matrix`` is the gain from user k into BS RF chain j.
    """

    model_config = ARRAY_MODEL_CONFIG

    true_matrix: ComplexArray
    estimate: ComplexArray
    noise_variance: float = Field(ge=0)

    @property
    def estimation_error(self) -> float:
        """Relative Frobenius error of the estimate."""
        return float(
            np.linalg.norm(self.estimate - self.true_matrix)
            / np.linalg.norm(self.true_matrix)
        )
