import logging
from typing import Optional

from app.config.settings import settings

_LEVEL_COLOURS = {
    logging.DEBUG: "\033[36mDEBUG\033[0m",
    logging.INFO: "\033[32mINFO\033[0m",
    logging.WARNING: "\033[33mWARNING\033[0m",
    logging.ERROR: "\033[31mERROR\033[0m",
    logging.CRITICAL: "\033[35mCRITICAL\033[0m",
}


def setup_logging(level: Optional[str] = None):
    """
    Configure logging with colored output.

    Args:
        level: Optional level name overriding settings.LOG_LEVEL (the CLI uses this
            for --verbose).
    """
    level_name = (level or settings.LOG_LEVEL).upper()
    log_level = getattr(logging, level_name, logging.INFO)
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()],
        force=True,
    )

    for numeric_level, coloured in _LEVEL_COLOURS.items():
        logging.addLevelName(numeric_level, coloured)

    # the HTTP client stack is chatty at DEBUG
    for noisy in ("httpx", "httpcore", "asyncio"):
        logging.getLogger(noisy).setLevel(max(log_level, logging.INFO))


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the given name."""
    return logging.getLogger(name)
