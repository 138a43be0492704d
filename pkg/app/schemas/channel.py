import math

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    field_validator,
    model_validator,
)

from app.core.config import settings
from app.schemas.types import ARRAY_MODEL_CONFIG, ComplexArray, RealArray


class RicianFactor(BaseModel):
    """Rician K-factor in linear scale; ``inf`` means a pure LOS channel."""

    model_config = ConfigDict(frozen=True)

    kappa: float = Field(ge=0)

    @property
    def los_weight(self) -> float:
        if math.isinf(self.kappa):
            return 1.0
        return math.sqrt(self.kappa / (self.kappa + 1.0))

    @property
    def scatter_weight(self) -> float:
        if math.isinf(self.kappa):
            return 0.0
        return math.sqrt(1.0 / (self.kappa + 1.0))


class ClusterConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_clusters: PositiveInt
    paths_per_cluster: list[PositiveInt]
    cluster_angle_spread: float = Field(
        default_factory=lambda: settings.CLUSTER_ANGLE_SPREAD, ge=0
    )

    @model_validator(mode="after")
    def check_path_counts(self) -> "ClusterConfig":
        if len(self.paths_per_cluster) != self.num_clusters:
            raise ValueError(  # noqa: TRY003
                f"paths_per_cluster has {len(self.paths_per_cluster)} entries, "
                f"expected num_clusters={self.num_clusters}"
            )
        return self

    @property
    def total_paths(self) -> int:
        return sum(self.paths_per_cluster)


class ClusterPaths(BaseModel):
    """One realization of the clustered scattering geometry, one entry per path."""

    model_config = ARRAY_MODEL_CONFIG

    bs_angles: RealArray
    ue_angles: RealArray
    gains: ComplexArray

    @model_validator(mode="after")
    def check_lengths(self) -> "ClusterPaths":
        n = self.gains.shape[0]
        if self.bs_angles.shape != (n,) or self.ue_angles.shape != (n,):
            raise ValueError("bs_angles, ue_angles and gains must have equal length")  # noqa: TRY003
        return self


class UserChannel(BaseModel):
    """Uplink channel of one user, H_k = los_weight * los + scatter_weight * scatter.

    The downlink channel is the transpose of the same matrix (TDD reciprocity).
    """

    model_config = ARRAY_MODEL_CONFIG

    los: ComplexArray
    scatter: ComplexArray
    rician: RicianFactor
    theta: float
    phi: float

    @field_validator("los", "scatter")
    @classmethod
    def check_matrix(cls, v: ComplexArray) -> ComplexArray:
        if v.ndim != 2:
            raise ValueError("channel components must be M x P matrices")  # noqa: TRY003
        return v

    @model_validator(mode="after")
    def check_shapes(self) -> "UserChannel":
        if self.los.shape != self.scatter.shape:
            raise ValueError(  # noqa: TRY003
                f"LOS shape {self.los.shape} does not match "
                f"scatter shape {self.scatter.shape}"
            )
        return self
