from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

# Gram norms computed in floating point can undershoot N by rounding.
_GRAM_SLACK = 1e-9


class BoundInputs(BaseModel):
    model_config = ConfigDict(frozen=True)

    M: PositiveInt
    P: PositiveInt
    N: PositiveInt
    kappa: float = Field(ge=0)
    snr: float = Field(ge=0)
    frf_gram_fro_sq: float

    @model_validator(mode="after")
    def check_gram_norm(self) -> "BoundInputs":
        if self.frf_gram_fro_sq < self.N * (1.0 - _GRAM_SLACK):
            raise ValueError(  # noqa: TRY003
                f"frf_gram_fro_sq={self.frf_gram_fro_sq} is below N={self.N}; "
                "the Gram matrix of N unit-norm columns cannot be that small"
            )
        return self
