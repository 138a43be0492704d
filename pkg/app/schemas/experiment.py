import math
from datetime import datetime
from enum import Enum

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveInt,
    field_validator,
    model_validator,
)

from app.core.config import settings
from app.schemas.channel import ClusterConfig

MAX_SEED = 2**64 - 1


class ScatterMode(str, Enum):
    IID = "iid"
    CLUSTERED = "clustered"


class EstimationMode(str, Enum):
    PROPOSED = "proposed"
    PERFECT_EQUIVALENT = "perfect_equivalent"
    PERFECT_FULL = "perfect_full"


class CurveId(str, Enum):
    HYBRID_ZF = "hybrid_zf"
    ANALOG_ONLY = "analog_only"
    FULLY_DIGITAL = "fully_digital"
    BOUND_THM1 = "bound_thm1"
    BOUND_COR1 = "bound_cor1"
    BOUND_COR2 = "bound_cor2"


BOUND_CURVES = frozenset(
    {CurveId.BOUND_THM1, CurveId.BOUND_COR1, CurveId.BOUND_COR2}
)


def _default_snr_grid() -> list[float]:
    return [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    M: PositiveInt
    N: PositiveInt
    P: PositiveInt
    J: PositiveInt = Field(default_factory=lambda: settings.DEFAULT_GRID_POINTS)
    spacing_ratio: float = Field(
        default_factory=lambda: settings.DEFAULT_SPACING_RATIO, gt=0
    )
    kappa: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    scatter_mode: ScatterMode = ScatterMode.IID
    cluster: ClusterConfig | None = None
    snr_db_range: list[float] = Field(default_factory=_default_snr_grid)
    trials: PositiveInt = Field(default_factory=lambda: settings.DEFAULT_TRIALS)
    master_seed: int = Field(
        default_factory=lambda: settings.DEFAULT_SEED, ge=0, le=MAX_SEED
    )
    pilot_energy_db: float = 0.0
    estimation: EstimationMode = EstimationMode.PROPOSED
    estimation_snr_db: float | None = None
    curves: list[CurveId] = Field(default_factory=lambda: [CurveId.HYBRID_ZF])
    bs_angles: list[float] | None = None
    ue_angles: list[float] | None = None

    @field_validator("snr_db_range")
    @classmethod
    def check_snr_range(cls, v: list[float]) -> list[float]:
        if not v:
            raise ValueError("snr_db_range must not be empty")  # noqa: TRY003
        if not all(math.isfinite(x) for x in v):
            raise ValueError("snr_db_range values must be finite")  # noqa: TRY003
        return v

    @field_validator("curves")
    @classmethod
    def check_curves(cls, v: list[CurveId]) -> list[CurveId]:
        if not v:
            raise ValueError("at least one curve must be requested")  # noqa: TRY003
        if len(set(v)) != len(v):
            raise ValueError("curves must not repeat")  # noqa: TRY003
        return v

    @field_validator("bs_angles", "ue_angles")
    @classmethod
    def check_angles(cls, v: list[float] | None) -> list[float] | None:
        if v is not None and not all(0.0 <= a <= math.pi for a in v):
            raise ValueError("fixed angles must lie in [0, pi] radians")  # noqa: TRY003
        return v

    @model_validator(mode="after")
    def check_invariants(self) -> "ExperimentConfig":
        if self.N > self.M:
            raise ValueError(  # noqa: TRY003
                f"N={self.N} exceeds M={self.M}; the N ≤ M invariant requires "
                "no more users than BS antennas"
            )
        if self.scatter_mode is ScatterMode.CLUSTERED and self.cluster is None:
            raise ValueError("scatter_mode 'clustered' requires a cluster block")  # noqa: TRY003
        fixed = (("bs_angles", self.bs_angles), ("ue_angles", self.ue_angles))
        for name, angles in fixed:
            if angles is not None and len(angles) != self.N:
                raise ValueError(  # noqa: TRY003
                    f"{name} has {len(angles)} entries, expected N={self.N}"
                )
        return self


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    curve_id: CurveId
    snr_db: float
    mean_rate: float
    std_err: float = Field(ge=0)
    trials_used: int = Field(ge=0)
    outages: int = Field(ge=0)


class RunManifest(BaseModel):
    """Everything needed to reproduce a run exactly."""

    config_echo: ExperimentConfig
    tool_version: str
    started_at: datetime
    finished_at: datetime
    master_seed: int
