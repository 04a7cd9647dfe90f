"""Configuration and settings for ballgreen."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library defaults loaded from BALLGREEN_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="BALLGREEN_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Reproducibility
    seed: int = Field(default=7, ge=0, lt=2**64)

    # Quadrature defaults
    samples: int = Field(default=200_000, ge=1000)
    nodes_radial: int = Field(default=48, ge=2)
    nodes_angular: int = Field(default=48, ge=2)
    subdivisions: int = Field(default=8, ge=1)
    block_size: int = Field(default=50_000, ge=1000)  # MC samples per RNG substream

    # Report defaults
    t_grid: int = Field(default=64, ge=2)
    tol_mc: float = Field(default=1e-2, gt=0)
    tol_closed: float = Field(default=1e-8, gt=0)

    # Thread pool for grid scans and MC blocks
    max_workers: int = Field(default=4, ge=1)

    # Logfire
    logfire_token: str | None = None
    logfire_env: str = "development"


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
