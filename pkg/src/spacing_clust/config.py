"""
Configuration and logging setup.

Settings come from the environment (optionally populated from a .env file
by the entry points via python-dotenv). CLI flags override them.
"""

import logging
import os
import sys
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConfigError

LOG_FORMAT = "[%(name)s] %(message)s"

THREADS_ENV = "SPACING_CLUST_THREADS"
LOG_LEVEL_ENV = "SPACING_CLUST_LOG_LEVEL"
AUTO_PRIM_ENV = "SPACING_CLUST_AUTO_PRIM_N"


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'")
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    """
    Process-wide settings.

    Attributes:
        threads: Upper bound on worker threads for internal parallel loops
        log_level: Logging level name
        auto_prim_n: Point count at which single-linkage switches to Prim
    """
    threads: int
    log_level: str = "INFO"
    auto_prim_n: int = 2000

    @classmethod
    def from_env(cls) -> "Settings":
        """Read settings from environment variables."""
        raw_threads = os.getenv(THREADS_ENV)
        if raw_threads:
            threads = _positive_int(THREADS_ENV, raw_threads)
        else:
            threads = min(4, os.cpu_count() or 1)

        log_level = os.getenv(LOG_LEVEL_ENV, "INFO").upper()
        if not isinstance(logging.getLevelName(log_level), int):
            raise ConfigError(f"{LOG_LEVEL_ENV} is not a logging level: '{log_level}'")

        raw_prim = os.getenv(AUTO_PRIM_ENV)
        auto_prim_n = _positive_int(AUTO_PRIM_ENV, raw_prim) if raw_prim else 2000

        return cls(threads=threads, log_level=log_level, auto_prim_n=auto_prim_n)


# Global settings instance (singleton pattern)
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get the global settings instance.

    Returns:
        Settings resolved from the environment on first use
    """
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings():
    """Forget cached settings so the next call re-reads the environment."""
    global _settings
    _settings = None


def configure_logging(level: Optional[str] = None):
    """
    Configure root logging once for CLI / service use.

    Args:
        level: Level name; defaults to the configured SPACING_CLUST_LOG_LEVEL
    """
    level = (level or get_settings().log_level).upper()
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def override_settings(threads: Optional[int] = None, log_level: Optional[str] = None) -> Settings:
    """
    Replace selected settings for the rest of the process (CLI flags win over
    the environment).

    Returns:
        The settings now in effect
    """
    global _settings
    current = get_settings()
    if threads is not None:
        if threads < 1:
            raise ConfigError(f"threads must be positive, got {threads}")
        current = replace(current, threads=threads)
    if log_level is not None:
        level = log_level.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ConfigError(f"not a logging level: '{log_level}'")
        current = replace(current, log_level=level)
    _settings = current
    return current
