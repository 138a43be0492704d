import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from app.core.config import settings
from app.schemas.types import RealVector


class ArrayGeometry(BaseModel):
    """Uniform linear array: element count and element spacing in wavelengths."""

    model_config = ConfigDict(frozen=True)

    num_elements: PositiveInt
    spacing_ratio: float = Field(
        default_factory=lambda: settings.DEFAULT_SPACING_RATIO, gt=0
    )


class AngleGrid(BaseModel):
    """J candidate AoAs, (i - 1) * pi / J for i = 1..J; pi itself is excluded."""

    model_config = ConfigDict(frozen=True)

    num_points: PositiveInt = Field(
        default_factory=lambda: settings.DEFAULT_GRID_POINTS
    )

    @property
    def angles(self) -> RealVector:
        angles = np.arange(self.num_points, dtype=np.float64) * np.pi / self.num_points
        angles.setflags(write=False)
        return angles

    def nearest_index(self, angle: float) -> int:
        """Grid index whose angle is closest to ``angle`` (lowest index on ties)."""
        return int(np.argmin(np.abs(self.angles - angle)))
