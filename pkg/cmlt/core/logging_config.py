import logging
from typing import Optional

from cmlt.core.config import get_settings
from cmlt.core.logger import get_logger


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Setup centralized logging for a CLI run.
    Every ``cmlt.*`` module logger propagates into the configured ``cmlt`` logger.
    """
    settings = get_settings()
    logger = get_logger("cmlt", level or settings.log_level)

    # Set levels for some noisy libraries
    logging.getLogger("numpy").setLevel(logging.WARNING)
    logging.getLogger("opentelemetry").setLevel(logging.WARNING)

    logger.debug(f"Logging configured at {logging.getLevelName(logger.level)}, directory {settings.log_directory}")
    return logger
