import logging
import os

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.services.exceptions import ConfigError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger("hybridmimo")


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=True, extra="ignore"
    )

    PROJECT_NAME: str = "hybridmimo"

    # Array and channel defaults
    DEFAULT_GRID_POINTS: int = 180  # 1 degree sweep step
    DEFAULT_SPACING_RATIO: float = 0.5  # d / lambda
    CLUSTER_ANGLE_SPREAD: float = 0.1  # radians

    @field_validator("DEFAULT_GRID_POINTS")
    def validate_grid_points(cls, v: int) -> int:  # noqa: N805
        if v < 1:
            raise ValueError("DEFAULT_GRID_POINTS must be at least 1")  # noqa: TRY003
        return v

    @field_validator("DEFAULT_SPACING_RATIO")
    def validate_spacing_ratio(cls, v: float) -> float:  # noqa: N805
        if v <= 0:
            raise ValueError("DEFAULT_SPACING_RATIO must be positive")  # noqa: TRY003
        return v

    # ZF guard: largest accepted condition number of H^T H*
    CONDITION_LIMIT: float = 1e12

    # Monte Carlo defaults
    DEFAULT_TRIALS: int = 500
    DEFAULT_SEED: int = 0

    # Worker pool size; unset means one worker per CPU
    WORKER_THREADS: int | None = None

    @field_validator("WORKER_THREADS")
    def validate_worker_threads(cls, v: int | None) -> int | None:  # noqa: N805
        if v is not None and v < 1:
            raise ValueError("WORKER_THREADS must be at least 1")  # noqa: TRY003
        return v

    # Logging
    LOG_LEVEL: str = "INFO"  # DEBUG, INFO, WARNING, ERROR, CRITICAL

    def resolve_threads(self, override: int | None = None) -> int:
        """Pick the worker count: explicit override, then env, then CPU count."""
        if override is not None:
            if override < 1:
                raise ConfigError([f"threads must be at least 1, got {override}"])
            return override
        if self.WORKER_THREADS is not None:
            return self.WORKER_THREADS
        return os.cpu_count() or 1


settings = Settings()

# Update logging level based on settings
log_level = getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
logger.setLevel(log_level)
