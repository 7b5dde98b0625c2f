import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from rrsynth.errors import ConfigError


@dataclass(frozen=True)
class Settings:
    """Limits and defaults read from the environment (or a .env file)."""

    size_limit: int = 10_000_000
    solve_limit: int = 5_000
    strategy_budget: int = 1_000_000
    horizon: int = 2520
    log_level: str = "WARNING"


def _int_from_env(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'") from None
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


def load_settings():
    load_dotenv()
    defaults = Settings()
    return Settings(
        size_limit=_int_from_env("RRSYNTH_SIZE_LIMIT", defaults.size_limit),
        solve_limit=_int_from_env("RRSYNTH_SOLVE_LIMIT", defaults.solve_limit),
        strategy_budget=_int_from_env("RRSYNTH_BUDGET", defaults.strategy_budget),
        horizon=_int_from_env("RRSYNTH_HORIZON", defaults.horizon),
        log_level=os.environ.get("RRSYNTH_LOG_LEVEL", defaults.log_level).upper(),
    )


@lru_cache(maxsize=1)
def get_settings():
    return load_settings()
