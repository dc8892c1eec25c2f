"""Core configuration for chibound."""

from typing import Literal
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from CHIBOUND_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="CHIBOUND_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # Application
    app_name: str = "chibound"
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    # Size limits
    size_cap: int = Field(64, ge=1, description="Largest n accepted by the exact solvers")
    enumeration_cap: int = Field(7, ge=0, le=10, description="Largest n for labeled enumeration")
    input_vertex_cap: int = Field(
        100_000, ge=1, description="Largest n a DIMACS problem line may declare"
    )

    # Sampling
    random_max_tries: int = Field(10_000, ge=1)
    default_edge_probability: float = Field(0.5, ge=0.0, le=1.0)

    # Campaigns
    workers: int = Field(0, ge=0, description="Process pool size; 0 = one per CPU, 1 = in-process")
    shards_per_n: int = Field(64, ge=1)
    progress: bool = True


# Global settings instance
settings = Settings()
