"""Loguru sink configuration."""

import sys

from loguru import logger

from qboson.config import Settings, get_settings


def configure_logging(settings: Settings | None = None) -> None:
    """Route loguru output according to settings.

    Args:
        settings: Settings carrying log_level and optional log_file
    """
    settings = settings or get_settings()
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level)
    if settings.log_file is not None:
        settings.log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(settings.log_file, level="DEBUG", rotation="10 MB")
    logger.debug(f"Logging configured at {settings.log_level}")
