"""
Centralized configuration for effham.

Settings are layered, highest priority first:

1. keyword arguments passed to ``AppConfig``
2. environment variables (``EFFHAM_`` prefix, ``__`` for nesting, e.g.
   ``EFFHAM_NUMERICS__TOLERANCE=1e-10``), including a local ``.env`` file
3. ``config/config.<environment>.toml``, then ``config/config.toml``

Sweep parallelism is read from ``EFFHAM_THREADS``.
"""

import os
import threading
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Type

from dotenv import load_dotenv
from pydantic import Field, field_validator, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

load_dotenv()

CONFIG_DIR = Path("config")


class Environment(str, Enum):
    """Application environment types."""
    DEVELOPMENT = "development"
    TESTING = "testing"
    PRODUCTION = "production"


class Units(str, Enum):
    """How frequency-like parameters are read. Labels reports only."""
    FREQUENCY = "frequency"
    ANGULAR = "angular"


class NumericsConfig(BaseSettings):
    """Tolerances and iteration limits shared by the solvers."""

    model_config = SettingsConfigDict(env_prefix="EFFHAM_NUMERICS_")

    tolerance: float = Field(1e-12, description="NPAD stop criterion on sqrt of the targeted norm (GHz)")
    max_rotations: int = Field(10_000, description="Rotation cap for full and targeted NPAD")
    block_max_rotations: int = Field(100_000, description="Rotation cap for block NPAD")
    stale_tolerance: float = Field(1e-10, description="Allowed mismatch when re-checking a rotation")
    degenerate_gap_floor: float = Field(1e-12, description="Smallest gap accepted by the SW generator (GHz)")
    hermitian_rtol: float = Field(1e-12, description="Relative asymmetry absorbed by symmetrization")
    oracle_max_sweeps: int = Field(100, description="Sweep cap of the reference Jacobi eigensolver")
    oracle_tolerance: float = Field(1e-15, description="Relative off-diagonal target of the reference solver")

    @field_validator("tolerance", "stale_tolerance", "degenerate_gap_floor", "hermitian_rtol", "oracle_tolerance")
    @classmethod
    def validate_nonnegative(cls, v: float) -> float:
        """Tolerances are magnitudes."""
        if v < 0:
            raise ValueError("tolerances must be non-negative")
        return v

    @field_validator("max_rotations", "block_max_rotations", "oracle_max_sweeps")
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Iteration caps must allow at least one step."""
        if v < 1:
            raise ValueError("iteration limits must be at least 1")
        return v


def _default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class SweepConfig(BaseSettings):
    """Parameter sweep execution."""

    model_config = SettingsConfigDict(env_prefix="EFFHAM_")

    threads: int = Field(default_factory=_default_threads, description="Worker threads for grid sweeps")
    resonance_mask: float = Field(1e-9, description="Denominators below this (GHz) are masked as NaN")

    @field_validator("threads")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """At least one worker."""
        if v < 1:
            raise ValueError("threads must be at least 1")
        return v


class LoggingConfig(BaseSettings):
    """Logging configuration."""

    model_config = SettingsConfigDict(env_prefix="EFFHAM_LOG_")

    level: str = Field("WARNING", description="Logging level")
    format: str = Field(
        "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{function} - {message}",
        description="loguru format string",
    )
    file_path: Optional[str] = Field(None, description="Log file path")
    max_file_size: int = Field(10 * 1024 * 1024, description="Rotate the log file at this size (bytes)")
    backup_count: int = Field(5, description="Number of rotated files kept")
    json_logs: bool = Field(False, description="Serialize records as JSON")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        """Validate logging level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level. Must be one of: {valid_levels}")
        return v.upper()


class OutputConfig(BaseSettings):
    """Artifact output settings."""

    model_config = SettingsConfigDict(env_prefix="EFFHAM_OUTPUT_")

    units: Units = Field(Units.FREQUENCY, description="Unit convention recorded in reports")
    svg_hashsalt: str = Field("effham", description="Fixed SVG id salt so plots are byte-stable")


class AppConfig(BaseSettings):
    """Main application configuration."""

    model_config = SettingsConfigDict(
        env_prefix="EFFHAM_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    environment: Environment = Field(Environment.DEVELOPMENT, description="Application environment")
    debug: bool = Field(False, description="Debug mode")

    numerics: NumericsConfig = Field(default_factory=NumericsConfig, description="Solver tolerances")
    sweep: SweepConfig = Field(default_factory=SweepConfig, description="Sweep execution")
    logging: LoggingConfig = Field(default_factory=LoggingConfig, description="Logging configuration")
    output: OutputConfig = Field(default_factory=OutputConfig, description="Output settings")

    @field_validator("environment", mode="before")
    @classmethod
    def validate_environment(cls, v):
        """Validate and normalize environment."""
        if isinstance(v, str):
            return Environment(v.lower())
        return v

    @model_validator(mode="after")
    def validate_production_settings(self) -> "AppConfig":
        """Production runs never run in debug mode."""
        if self.environment == Environment.PRODUCTION:
            self.debug = False
        return self

    @model_validator(mode="after")
    def apply_thread_override(self) -> "AppConfig":
        """EFFHAM_THREADS wins over a [sweep] table in the TOML files."""
        threads = os.getenv("EFFHAM_THREADS")
        if threads:
            self.sweep = SweepConfig(threads=int(threads), resonance_mask=self.sweep.resonance_mask)
        return self

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        """Add the TOML files below the environment sources."""
        sources = [init_settings, env_settings, dotenv_settings]
        toml_file = _toml_file()
        if toml_file is not None:
            sources.append(TomlConfigSettingsSource(settings_cls, toml_file=toml_file))
        sources.append(file_secret_settings)
        return tuple(sources)


def _toml_file() -> Optional[Path]:
    """Return the first existing config file for the current environment."""
    env = os.getenv("EFFHAM_ENVIRONMENT", os.getenv("ENVIRONMENT", "development")).lower()
    for candidate in (CONFIG_DIR / f"config.{env}.toml", CONFIG_DIR / "config.toml"):
        if candidate.exists():
            return candidate
    return None


class ConfigManager:
    """Process-wide holder of the loaded ``AppConfig``."""

    _instance = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, "_initialized"):
            self._config: Optional[AppConfig] = None
            self._initialized = True

    def get_config(self) -> AppConfig:
        """Load on first use, then return the cached configuration."""
        if self._config is None:
            with self._lock:
                if self._config is None:
                    self._config = AppConfig()
        return self._config

    def set_config(self, config: AppConfig) -> None:
        """Replace the active configuration (CLI overrides, tests)."""
        with self._lock:
            self._config = config

    def reload(self) -> AppConfig:
        """Rebuild the configuration from all sources."""
        with self._lock:
            self._config = AppConfig()
        return self._config


config_manager = ConfigManager()


def get_config() -> AppConfig:
    """Get the current application configuration."""
    return config_manager.get_config()


def reload_config() -> AppConfig:
    """Reload configuration from files and environment."""
    return config_manager.reload()
