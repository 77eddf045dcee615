import os
from typing import Optional

from dotenv import load_dotenv

from app.errors import ConfigError

load_dotenv()

SEED_ENV_VAR = "MPTCP_LAB_SEED"


def seed_override() -> Optional[int]:
    """Return the seed from MPTCP_LAB_SEED if it is set, read at call time."""
    raw = os.getenv(SEED_ENV_VAR)
    if raw is None or not raw.strip():
        return None
    try:
        seed = int(raw.strip())
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    if seed < 0:
        raise ConfigError(f"{SEED_ENV_VAR} must be nonnegative, got {seed}")
    return seed


class Settings:
    """Application settings."""

    # Security Configuration
    API_KEY: Optional[str] = os.getenv("API_KEY")
    ALLOWED_ORIGINS: list[str] = os.getenv("ALLOWED_ORIGINS", "*").split(",")

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

    # Equilibrium solver
    SOLVER_TOLERANCE: float = float(os.getenv("SOLVER_TOLERANCE", "1e-7"))
    SOLVER_MAX_ITERATIONS: int = int(os.getenv("SOLVER_MAX_ITERATIONS", "100000"))
    # Diminishing step a / (b + k)
    SOLVER_STEP_A: float = float(os.getenv("SOLVER_STEP_A", "1.0"))
    SOLVER_STEP_B: float = float(os.getenv("SOLVER_STEP_B", "1.0"))
    BRUTE_FORCE_MAX_PATHS: int = int(os.getenv("BRUTE_FORCE_MAX_PATHS", "4"))

    # Fluid dynamics
    DYNAMICS_DT: float = float(os.getenv("DYNAMICS_DT", "1e-3"))
    DYNAMICS_BARRIER: float = float(os.getenv("DYNAMICS_BARRIER", "1e-3"))
    DYNAMICS_PRICE_CAP: float = float(os.getenv("DYNAMICS_PRICE_CAP", "1.0"))
    OSCILLATION_THRESHOLD: float = float(os.getenv("OSCILLATION_THRESHOLD", "0.05"))
    CONVERGENCE_STEPS: int = int(os.getenv("CONVERGENCE_STEPS", "100"))
    BLOWUP_FACTOR: float = float(os.getenv("BLOWUP_FACTOR", "1000"))

    # Experiment orchestration
    ENSEMBLE_WORKERS: int = int(os.getenv("ENSEMBLE_WORKERS", "1"))
    REPORT_SIGNIFICANT_DIGITS: int = int(os.getenv("REPORT_SIGNIFICANT_DIGITS", "9"))

    # Experiment Tracking Configuration
    TASK_CLEANUP_INTERVAL_SECONDS: int = int(
        os.getenv("TASK_CLEANUP_INTERVAL_SECONDS", "60")
    )
    TASK_EXPIRY_SECONDS: int = int(os.getenv("TASK_EXPIRY_SECONDS", "300"))


settings = Settings()
