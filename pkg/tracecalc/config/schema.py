"""Configuration schema using Pydantic."""

from pathlib import Path

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class HeatConfig(BaseModel):
    """Heat semigroup configuration."""
    block_cap: int = 300  # Largest graded block heat_finite_N will exponentiate
    max_grade: int = 12  # Largest grade transform and moments accept

    @field_validator("block_cap")
    @classmethod
    def _validate_block_cap(cls, v: int) -> int:
        if not 1 <= v <= 2000:
            raise ValueError(f"block_cap must be between 1 and 2000, got {v}")
        return v

    @field_validator("max_grade")
    @classmethod
    def _validate_max_grade(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"max_grade must be non-negative, got {v}")
        return v


class SeriesConfig(BaseModel):
    """Formal power series configuration."""
    order: int = 16  # Truncation order K
    fd_step: float = 1e-4  # Time step of the PDE-residual finite difference
    residual_flag: float = 1e-6

    @field_validator("order")
    @classmethod
    def _validate_order(cls, v: int) -> int:
        if not 1 <= v <= 200:
            raise ValueError(f"order must be between 1 and 200, got {v}")
        return v

    @field_validator("fd_step", "residual_flag")
    @classmethod
    def _validate_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"must be positive, got {v}")
        return v


class LabConfig(BaseModel):
    """Monte Carlo defaults."""
    step: float = 5e-3
    paths: int = 2000
    seed: int = 0
    workers: int = 4
    reorthonormalize_every: int = 100
    chunk_size: int = 250  # Paths batched per matrix call; samples do not depend on it

    @field_validator("step")
    @classmethod
    def _validate_step(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"step must be positive, got {v}")
        return v

    @field_validator("paths", "workers", "reorthonormalize_every", "chunk_size")
    @classmethod
    def _validate_count(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v


class Config(BaseSettings):
    """Root configuration for tracecalc."""
    heat: HeatConfig = Field(default_factory=HeatConfig)
    series: SeriesConfig = Field(default_factory=SeriesConfig)
    lab: LabConfig = Field(default_factory=LabConfig)
    cache: str = "~/.tracecalc/cache/semigroup.json"
    output_dir: str = "~/.tracecalc/runs"

    model_config = SettingsConfigDict(env_prefix="TRACECALC_", env_nested_delimiter="__")

    @classmethod
    def settings_customise_sources(
        cls, settings_cls, init_settings, env_settings, dotenv_settings, file_secret_settings
    ):
        # Environment beats values loaded from the config file.
        return env_settings, init_settings, dotenv_settings, file_secret_settings

    @property
    def cache_path(self) -> Path:
        """Get expanded cache file path."""
        return Path(self.cache).expanduser()

    @property
    def output_path(self) -> Path:
        """Get expanded output directory."""
        return Path(self.output_dir).expanduser()
