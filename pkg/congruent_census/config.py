"""
Configuration module for congruent-census.

Environment-driven settings (prefix CENSUS_, optional .env file) for the
resource limits and defaults shared by the CLI, the census and the
verification suites.
"""

from typing import List, Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class CensusSettings(BaseSettings):
    """Runtime settings."""

    model_config = SettingsConfigDict(
        env_prefix="CENSUS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Resources
    mem_budget_mb: int = Field(default=2048, ge=16)
    default_jobs: int = Field(default=1, ge=1, le=256)
    class_enumeration_limit: int = Field(default=10**6, ge=256)
    # count_Bprime(3) must be enumerated: its closed form is not integral.
    max_enumerated_k: int = Field(default=5, ge=3, le=5)

    # Defaults for runs
    default_seed: int = Field(default=20240601, ge=0)
    oracle_x0: int = Field(default=200_000, ge=9, le=10**6)
    checkpoints: List[int] = Field(default=[10**4, 10**5, 10**6, 10**7])

    # Logging
    log_level: str = Field(default="INFO")
    log_format: Literal["json", "console"] = "json"

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"log_level must be one of: {allowed}")
        return v.upper()

    def mem_budget_bytes(self) -> int:
        return self.mem_budget_mb * 2**20


# Global configuration instance
config = CensusSettings()


def get_config() -> CensusSettings:
    """Get the global configuration instance."""
    return config


def validate_config(settings: CensusSettings = config) -> None:
    """Reject settings that are individually valid but inconsistent."""
    if any(a >= b for a, b in zip(settings.checkpoints, settings.checkpoints[1:])):
        raise ValueError(
            f"checkpoints must be strictly increasing, got {settings.checkpoints}"
        )
    if settings.checkpoints and settings.checkpoints[0] < 2:
        raise ValueError("checkpoints must be at least 2")


if __name__ == "__main__":
    validate_config()
    print("Configuration loaded successfully:")
    print(f"Memory budget: {config.mem_budget_mb} MiB")
    print(f"Jobs: {config.default_jobs}")
    print(f"Seed: {config.default_seed}")
    print(f"Oracle bound: {config.oracle_x0}")
    print(f"Checkpoints: {config.checkpoints}")
    print(f"Logging: {config.log_level} ({config.log_format})")
