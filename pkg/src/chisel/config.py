import os
from dataclasses import dataclass, field

from .errors import ParameterError

DEFAULT_BUDGET = 2_000_000_000
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def get_env_var(var_name, default=None):
    return os.getenv(var_name, default)


def _env_int(var_name: str, default: int) -> int:
    value = get_env_var(var_name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ParameterError(f"{var_name} must be an integer, got {value!r}") from None


def check_log_level(level: str) -> str:
    """Upper-cased logging level name; raises ParameterError for unknown names."""
    name = level.strip().upper()
    if name not in LOG_LEVELS:
        raise ParameterError(f"log level must be one of {', '.join(LOG_LEVELS)}, got {level!r}")
    return name


@dataclass
class Settings:
    """Runtime knobs for counting and logging, read from CHISEL_* variables."""

    threads: int = field(default_factory=lambda: _env_int("CHISEL_THREADS", os.cpu_count() or 1))
    budget: int = field(default_factory=lambda: _env_int("CHISEL_BUDGET", DEFAULT_BUDGET))
    log_level: str = field(
        default_factory=lambda: get_env_var("CHISEL_LOG_LEVEL", "") or "WARNING"
    )

    def __post_init__(self):
        self.log_level = check_log_level(self.log_level)
