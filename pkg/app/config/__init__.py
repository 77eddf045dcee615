from app.config.logging import get_logger, setup_logging
from app.config.settings import seed_override, settings

__all__ = ["get_logger", "setup_logging", "seed_override", "settings"]
