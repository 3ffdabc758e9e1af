"""
Runtime configuration loaded from the environment (.env supported)
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

from backend.errors import ConfigError

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent
DEFAULT_FIXTURE_DIR = PACKAGE_DIR / "data"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    fixture_dir: Path
    database_url: str
    log_level: str
    default_shots: int
    default_seed: int


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Read settings once per process

    Returns:
        Settings built from TELEPORT_* variables with defaults
    """
    fixture_dir = Path(os.getenv("TELEPORT_FIXTURE_DIR") or DEFAULT_FIXTURE_DIR)
    shots = _int_env("TELEPORT_DEFAULT_SHOTS", 8192)
    if shots <= 0:
        raise ConfigError(f"TELEPORT_DEFAULT_SHOTS must be positive, got {shots}")

    log_level = os.getenv("TELEPORT_LOG_LEVEL", "INFO").strip().upper()
    if log_level not in LOG_LEVELS:
        raise ConfigError(f"TELEPORT_LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}; got {log_level!r}")

    return Settings(
        fixture_dir=fixture_dir,
        database_url=os.getenv("TELEPORT_DATABASE_URL", "sqlite:///./teleport_runs.db"),
        log_level=log_level,
        default_shots=shots,
        default_seed=_int_env("TELEPORT_DEFAULT_SEED", 2017),
    )
