import math

from pydantic import BaseModel, ConfigDict, Field, computed_field

from app.schemas.types import ARRAY_MODEL_CONFIG, ComplexArray


class Precoder(BaseModel):
    """Baseband precoder W (column k serves user k) with power normalization beta."""

    model_config = ARRAY_MODEL_CONFIG

    weights: ComplexArray
    beta: float = Field(gt=0)


class LinkResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    desired_power: float = Field(ge=0)
    interference_power: float = Field(ge=0)
    noise_power: float = Field(gt=0)
    symbol_energy: float = Field(gt=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def sinr(self) -> float:
        return self.desired_power / (self.interference_power + self.noise_power)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def rate(self) -> float:
        """Achievable rate in bits/s/Hz."""
        return math.log2(1.0 + self.sinr)
