"""Project logger.

A single named logger rendered through rich on stderr, so that stdout stays
reserved for command output (CSV / JSON).
"""

import logging
import os

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = "sharp_mtg"


def get_logger(logger_name: str) -> logging.Logger:
    rich_handler = RichHandler(
        console=Console(stderr=True),
        show_time=False,
        show_path=False,
        rich_tracebacks=False,
        markup=False,
    )
    rich_handler.setFormatter(logging.Formatter(fmt="%(message)s", datefmt="[%X]"))

    _logger = logging.getLogger(logger_name)
    if not _logger.handlers:
        _logger.addHandler(rich_handler)
    _logger.setLevel(os.getenv("LOG_LEVEL", "INFO").upper())
    _logger.propagate = False
    return _logger


logger: logging.Logger = get_logger(LOGGER_NAME)


def set_log_level_to_debug() -> None:
    logger.setLevel(logging.DEBUG)


def set_log_level_to_info() -> None:
    logger.setLevel(logging.INFO)


def log_debug(msg: str, *args, **kwargs) -> None:
    logger.debug(msg, *args, **kwargs)


def log_info(msg: str, *args, **kwargs) -> None:
    logger.info(msg, *args, **kwargs)


def log_warning(msg: str, *args, **kwargs) -> None:
    logger.warning(msg, *args, **kwargs)


def log_error(msg: str, *args, **kwargs) -> None:
    logger.error(msg, *args, **kwargs)
