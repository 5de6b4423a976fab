import os
from dataclasses import dataclass

from dotenv import load_dotenv

from scancover.errors import ConfigError

DEFAULT_EDGE_LIMIT = 9
DEFAULT_VERTEX_LIMIT_1D = 10
DEFAULT_CHROMATIC_LIMIT = 14
DEFAULT_EXACT_THRESHOLD = 12
DEFAULT_TURAN_CAP = 100_000


@dataclass(frozen=True)
class Settings:
    edge_limit: int = DEFAULT_EDGE_LIMIT
    vertex_limit_1d: int = DEFAULT_VERTEX_LIMIT_1D
    chromatic_limit: int = DEFAULT_CHROMATIC_LIMIT
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD
    turan_cap: int = DEFAULT_TURAN_CAP
    log_level: str = "WARNING"


def _int_env(name: str) -> int | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def load_settings() -> Settings:
    """
    Read settings from the environment (and a .env file, if present).

    SCANCOVER_ORACLE_LIMIT replaces all oracle caps with a single value.
    """
    load_dotenv()
    oracle_limit = _int_env("SCANCOVER_ORACLE_LIMIT")
    exact_threshold = _int_env("SCANCOVER_EXACT_THRESHOLD")
    turan_cap = _int_env("SCANCOVER_TURAN_CAP")
    log_level = str(os.getenv("SCANCOVER_LOG_LEVEL", "WARNING")).upper()

    return Settings(
        edge_limit=oracle_limit or DEFAULT_EDGE_LIMIT,
        vertex_limit_1d=oracle_limit or DEFAULT_VERTEX_LIMIT_1D,
        chromatic_limit=oracle_limit or DEFAULT_CHROMATIC_LIMIT,
        exact_threshold=exact_threshold or DEFAULT_EXACT_THRESHOLD,
        turan_cap=turan_cap or DEFAULT_TURAN_CAP,
        log_level=log_level,
    )
