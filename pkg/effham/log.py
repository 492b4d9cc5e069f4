"""
Logging setup.

The library logs through loguru and stays silent until ``setup_logging`` is
called (the CLI does this on start-up).
"""

import sys
from typing import Optional

from loguru import logger

from .settings import LoggingConfig, get_config

logger.disable("effham")

_handler_ids = []


def setup_logging(config: Optional[LoggingConfig] = None) -> None:
    """Install stderr (and optionally file) sinks from the logging configuration."""
    config = config or get_config().logging

    for handler_id in _handler_ids:
        logger.remove(handler_id)
    _handler_ids.clear()
    # drop loguru's default stderr sink so records are not printed twice
    try:
        logger.remove(0)
    except ValueError:
        pass

    _handler_ids.append(
        logger.add(
            sys.stderr,
            level=config.level,
            format=config.format,
            serialize=config.json_logs,
            colorize=not config.json_logs,
        )
    )
    if config.file_path:
        _handler_ids.append(
            logger.add(
                config.file_path,
                level=config.level,
                format=config.format,
                serialize=config.json_logs,
                rotation=config.max_file_size,
                retention=config.backup_count,
                encoding="utf-8",
            )
        )
    logger.enable("effham")
