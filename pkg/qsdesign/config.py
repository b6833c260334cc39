"""Configuration management with pydantic-settings and validation.

Environment variables (and ``.env``) only supply default locations. Everything
that changes what a run computes arrives as a flag and is validated by the
pydantic models in construct, search and here.
"""

import hashlib
import os
from pathlib import Path

from pydantic import BaseModel, ConfigDict, field_validator
from pydantic_settings import BaseSettings

from . import __version__
from .f2core import DEFAULT_ENUMERATION_BUDGET


class Settings(BaseSettings):
    """Default paths loaded from environment variables."""

    codes_dir: Path = Path("codes")
    reports_dir: Path = Path("reports")
    log_level: str = "INFO"

    # Verdict archive (optional, runs work without it)
    database_url: str = ""

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "QSDESIGN_",
        "extra": "ignore",
    }

    @field_validator("database_url", mode="before")
    @classmethod
    def fix_database_url(cls, v):
        """Hosted Postgres often hands out postgres:// but SQLAlchemy requires postgresql://."""
        if isinstance(v, str) and v.startswith("postgres://"):
            return v.replace("postgres://", "postgresql://", 1)
        return v

    @field_validator("log_level", mode="before")
    @classmethod
    def check_log_level(cls, v):
        level = str(v).strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level {v!r}")
        return level


def get_settings() -> Settings:
    """Load and validate settings from environment.

    Raises:
        ValidationError: If an environment variable holds an invalid value.
    """
    return Settings()


def default_workers() -> int:
    return os.cpu_count() or 1


class RunConfig(BaseModel):
    """Parameters shared by every command, recorded in report headers."""

    model_config = ConfigDict(frozen=True)

    command: str
    rng_seed: int = 1
    workers: int = 1
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    parameters: dict[str, int | str | bool | None] = {}

    @field_validator("workers")
    @classmethod
    def check_workers(cls, v):
        if v < 1:
            raise ValueError("workers must be positive")
        return v

    @field_validator("enumeration_budget")
    @classmethod
    def check_budget(cls, v):
        if not 0 <= v <= 40:
            raise ValueError("enumeration budget must lie in 0..40")
        return v

    def config_hash(self) -> str:
        """SHA-256 over everything except the worker count, which never changes results."""
        payload = self.model_dump_json(exclude={"workers"})
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def header(self) -> dict:
        return {
            "record": "header",
            "tool": "qsdesign",
            "version": __version__,
            "command": self.command,
            "config_hash": self.config_hash(),
            "rng_seed": self.rng_seed,
        }
