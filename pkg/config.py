# config.py
import logging
import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

VERSION = "0.4.0"


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"{name}={raw!r} is not an integer, using default {default}")
        return default


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        logger.warning(f"{name}={raw!r} is not a number, using default {default}")
        return default


DEFAULT_FUEL = _int_env("QCTL_FUEL", 64)
LFP_TOL = _float_env("QCTL_TOL", 1e-12)
LFP_MAX_ITER = _int_env("QCTL_MAX_ITER", 2000)
SEED = _int_env("QCTL_SEED", 0)
LOG_LEVEL = os.getenv("QCTL_LOG_LEVEL", "WARNING").upper()
UI_LANG = os.getenv("QCTL_LANG", "en")
LOCALES_DIR = os.getenv("QCTL_LOCALES_DIR", os.path.join(os.path.dirname(os.path.abspath(__file__)), "locales"))

# Dense representations grow as 4^n; nothing above this is attempted.
MAX_QUBITS = 8


@dataclass(frozen=True)
class RunConfig:
    fuel: int = DEFAULT_FUEL
    tol: float = LFP_TOL
    max_iter: int = LFP_MAX_ITER
    json: bool = False
    seed: int = SEED
    prune_eps: Optional[float] = None

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError(f"fuel must be at least 1, got {self.fuel}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if self.prune_eps is not None and self.prune_eps < 0:
            raise ValueError(f"prune_eps must be non-negative, got {self.prune_eps}")

    @classmethod
    def from_env(cls) -> "RunConfig":
        return cls()

    def with_overrides(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})
