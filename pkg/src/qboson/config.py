"""Configuration management using Pydantic Settings."""

from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from QBOSON_* environment variables and .env file."""

    model_config = SettingsConfigDict(
        env_prefix="QBOSON_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Computation limits
    max_degree: int = Field(
        default=6,
        ge=0,
        le=24,
        description="Global cap on word degrees enumerated by pairing blocks and suites",
    )
    nilpotence_cap: int = Field(default=32, ge=1, le=256)
    memoize: bool = Field(default=True, description="Keep pairing and product memo tables")

    # Defaults
    default_type: str = Field(default="A1", description="Cartan preset used when none is given")
    output_format: Literal["text", "json"] = Field(default="text")

    # Reports
    report_path: Path = Field(default=Path("reports"))

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(default="WARNING")
    log_file: Path | None = Field(default=None)

    @property
    def decomposition_path(self) -> Path:
        """Path where decomposition reports are written."""
        return self.report_path / "decompositions"


def get_settings() -> Settings:
    """Get application settings instance."""
    return Settings()
