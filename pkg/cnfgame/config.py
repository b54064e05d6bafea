import os
from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables from the project .env first, then fallback to the working directory
package_env = os.path.join(os.path.dirname(__file__), '..', '.env')

if os.path.exists(package_env):
    load_dotenv(package_env)
else:
    load_dotenv()


def _int_env(key: str, default: int) -> int:
    raw = os.getenv(key, "")
    if not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"{key} must be non-negative, got {value}")
    return value


class Settings:
    """Environment-backed settings. Read on access so overrides apply immediately."""

    # Exhaustive solver: universe size bound
    @property
    def SOLVE_LIMIT(self) -> int:
        return _int_env("CNFGAME_SOLVE_LIMIT", 14)

    # Best response only branches on one player, so it reaches further
    @property
    def BEST_RESPONSE_LIMIT(self) -> int:
        return _int_env("CNFGAME_BEST_RESPONSE_LIMIT", 20)

    @property
    def WORKERS(self) -> int:
        return max(1, _int_env("CNFGAME_WORKERS", 1))

    # Largest |Y ∪ Z| for which constraint soundness is checked over every assignment
    @property
    def AUDIT_EXHAUSTIVE_LIMIT(self) -> int:
        return _int_env("CNFGAME_AUDIT_EXHAUSTIVE_LIMIT", 12)

    @property
    def LOG_LEVEL(self) -> str:
        return os.getenv("CNFGAME_LOG_LEVEL", "WARNING").upper()


settings = Settings()
