"""
Centralized configuration management using pydantic-settings.
All environment variables and numerical defaults in one place.
"""

from functools import lru_cache
from typing import Literal, Optional, Tuple

from pydantic import AliasChoices, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """Tolerances and eigensolver configuration."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore", populate_by_name=True)

    rank_tol: float = Field(
        1e-12, validation_alias=AliasChoices("FRAMEKIT_TOL", "rank_tol")
    )
    jacobi_max_sweeps: int = Field(
        100, validation_alias=AliasChoices("FRAMEKIT_JACOBI_MAX_SWEEPS", "jacobi_max_sweeps")
    )
    jacobi_rel_tol: float = Field(
        1e-14, validation_alias=AliasChoices("FRAMEKIT_JACOBI_REL_TOL", "jacobi_rel_tol")
    )
    eig_backend: Literal["jacobi", "lapack"] = Field(
        "jacobi", validation_alias=AliasChoices("FRAMEKIT_EIG_BACKEND", "eig_backend")
    )
    regularity_tol: float = Field(
        1e-9, validation_alias=AliasChoices("FRAMEKIT_REGULARITY_TOL", "regularity_tol")
    )

    @field_validator("rank_tol", "jacobi_rel_tol", "regularity_tol")
    @classmethod
    def validate_positive(cls, v):
        if not v > 0:
            raise ValueError("tolerances must be strictly positive")
        return v


class SweepSettings(BaseSettings):
    """Truncation sweep and classification thresholds."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore", populate_by_name=True)

    default_dims: Tuple[int, ...] = (8, 16, 32, 64, 128, 256)
    bounded_exponent: float = Field(
        0.1, validation_alias=AliasChoices("FRAMEKIT_BOUNDED_EXPONENT", "bounded_exponent")
    )
    unbounded_exponent: float = Field(
        0.5, validation_alias=AliasChoices("FRAMEKIT_UNBOUNDED_EXPONENT", "unbounded_exponent")
    )
    workers: int = Field(1, validation_alias=AliasChoices("FRAMEKIT_WORKERS", "workers"))


class AffineCSSettings(BaseSettings):
    """Defaults of the discretized affine coherent state family."""

    model_config = SettingsConfigDict(
        env_file=".env", extra="ignore", populate_by_name=True, env_prefix="FRAMEKIT_AFFINE_"
    )

    n: int = 1
    r_max: float = 40.0
    r_nodes: int = 512
    x_samples: int = 256
    x_max: Optional[float] = None  # None: Nyquist of the r-grid, pi / h
    quadrature: Literal["midpoint", "trapezoid"] = "midpoint"

    @field_validator("n", "r_nodes", "x_samples")
    @classmethod
    def validate_counts(cls, v):
        if v < 1:
            raise ValueError("affine coherent state sizes must be >= 1")
        return v


class AppSettings(BaseSettings):
    """General application settings."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore", populate_by_name=True)

    app_name: str = Field("framekit", validation_alias=AliasChoices("APP_NAME", "app_name"))
    app_version: str = "1.0.0"
    debug_mode: bool = Field(False, validation_alias=AliasChoices("DEBUG", "debug_mode"))
    log_level: str = Field("INFO", validation_alias=AliasChoices("LOG_LEVEL", "log_level"))
    output_dir: str = Field(
        "framekit_out", validation_alias=AliasChoices("FRAMEKIT_OUTPUT_DIR", "output_dir")
    )
    float_digits: int = 17


class Settings(BaseSettings):
    """Main settings class combining all configurations."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Sub-configurations
    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    affine_cs: AffineCSSettings = Field(default_factory=AffineCSSettings)
    app: AppSettings = Field(default_factory=AppSettings)

    def get_tolerance(self):
        """Rank tolerance built from the numerics block."""
        from framekit.linalg.spectral import RankTolerance

        return RankTolerance(self.numerics.rank_tol)

    @property
    def is_debug(self) -> bool:
        return self.app.debug_mode


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
