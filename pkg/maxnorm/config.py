"""
Settings
--------
Caps and defaults for the engine. Values come from the environment (a .env file
is honoured) with the literal defaults below.
"""
import os
from dataclasses import dataclass, replace

from dotenv import load_dotenv

load_dotenv()

# --- Defaults ---
CAP_ORDER = int(os.getenv("MAXNORM_CAP_ORDER", "2000"))
BRUTE_FORCE_CAP = int(os.getenv("MAXNORM_BRUTE_FORCE_CAP", "5000"))
CAP_SUBGROUPS = int(os.getenv("MAXNORM_CAP_SUBGROUPS", "100000"))
CAP_INTERVAL = int(os.getenv("MAXNORM_CAP_INTERVAL", "512"))
CAP_CONJUGATES = int(os.getenv("MAXNORM_CAP_CONJUGATES", "10000"))
COMPLEMENT_BUDGET = int(os.getenv("MAXNORM_COMPLEMENT_BUDGET", "1000000"))
DEFAULT_SEED = int(os.getenv("MAXNORM_SEED", "0"))
DEFAULT_JOBS = int(os.getenv("MAXNORM_JOBS", "1"))
LOG_LEVEL = os.getenv("MAXNORM_LOG_LEVEL", "WARNING")

# Membership switches from a hashed element set to chain sifting above this many stored points.
ELEMENT_SET_POINTS = 2_000_000


@dataclass(frozen=True)
class Caps:
    """Every size limit the algorithms honour, bundled so it can travel through a call tree."""
    order: int = CAP_ORDER                  # subgroup-lattice enumeration
    brute_force: int = BRUTE_FORCE_CAP      # element-scan regime for normalizers, cosets, classes
    subgroups: int = CAP_SUBGROUPS          # distinct subgroups in one lattice
    interval: int = CAP_INTERVAL            # |H:Q| for interval enumeration
    conjugates: int = CAP_CONJUGATES        # conjugates scanned per witness search
    complement: int = COMPLEMENT_BUDGET     # lifted generator tuples tried per complement

    def __post_init__(self):
        for name in ("order", "brute_force", "subgroups", "interval", "conjugates", "complement"):
            if getattr(self, name) <= 0:
                raise ValueError(f"cap '{name}' must be positive, got {getattr(self, name)}")

    def with_overrides(self, **overrides) -> "Caps":
        """Returns a copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    @classmethod
    def from_env(cls) -> "Caps":
        """Re-reads the environment (after a late load_dotenv, for example)."""
        return cls(
            order=int(os.getenv("MAXNORM_CAP_ORDER", str(CAP_ORDER))),
            brute_force=int(os.getenv("MAXNORM_BRUTE_FORCE_CAP", str(BRUTE_FORCE_CAP))),
            subgroups=int(os.getenv("MAXNORM_CAP_SUBGROUPS", str(CAP_SUBGROUPS))),
            interval=int(os.getenv("MAXNORM_CAP_INTERVAL", str(CAP_INTERVAL))),
            conjugates=int(os.getenv("MAXNORM_CAP_CONJUGATES", str(CAP_CONJUGATES))),
            complement=int(os.getenv("MAXNORM_COMPLEMENT_BUDGET", str(COMPLEMENT_BUDGET))),
        )


DEFAULT_CAPS = Caps()
