"""
Runtime configuration.

Values come from (highest precedence first) ``CMLT_*`` environment variables,
a ``.env`` file, explicit overrides passed by the CLI and the defaults below.
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()

DEFAULT_CURVES_FILE = Path(__file__).resolve().parent.parent / "data" / "curves.yaml"


class Settings(BaseSettings):
    """Typed settings for sweeps, Euler products and logging."""

    model_config = SettingsConfigDict(env_prefix="CMLT_", env_file=".env", extra="ignore")

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, description="Worker processes")
    direct_cutoff: int = Field(default=10**6, ge=10**3, description="Default cutoff for direct Euler products")
    accelerated_cutoff: int = Field(default=10**5, ge=10**3, description="Default cutoff for accelerated Euler products")
    sieve_segment: int = Field(default=2**18, ge=1024, description="Odd entries per sieve segment")
    chunk_count: Optional[int] = Field(default=None, ge=1, description="Range chunks for parallel sweeps")
    log_level: str = Field(default="INFO", description="Log level")
    log_directory: str = Field(default="./logs", description="Directory for log files")
    enable_tracing: bool = Field(default=False, description="Export OpenTelemetry spans to the console")
    curves_file: Path = Field(default=DEFAULT_CURVES_FILE, description="Curve catalogue YAML")

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value}")
        return value

    @property
    def chunks(self) -> int:
        return self.chunk_count or 4 * self.threads


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()


def resolve_threads(flag: Optional[int]) -> int:
    """Worker count with precedence env > flag > default."""
    if os.getenv("CMLT_THREADS"):
        return get_settings().threads
    if flag is not None:
        if flag < 1:
            raise ValueError("--threads must be at least 1")
        return flag
    return get_settings().threads
