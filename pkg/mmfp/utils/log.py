"""
Tagged logging for mmfp
Lines look like "[Component] message" and go to stderr; stdout carries results only.
"""
import logging
import sys
from typing import Optional, Union

ROOT_LOGGER = "mmfp"

_configured = False


class _TagFormatter(logging.Formatter):
    """Formats records as '[Component] message'."""

    def format(self, record: logging.LogRecord) -> str:
        record.tag = record.name.rsplit(".", 1)[-1]
        return super().format(record)


def get_logger(component: str) -> logging.Logger:
    """
    Get the logger for a component.

    Args:
        component: Short component name shown in brackets (e.g. 'Spaces')

    Returns:
        Logger named mmfp.<component>
    """
    return logging.getLogger(f"{ROOT_LOGGER}.{component}")


def configure_logging(level: Optional[Union[int, str]] = None) -> None:
    """
    Install the stderr handler on the mmfp logger.

    Safe to call more than once; later calls only change the level.

    Args:
        level: Logging level name or number; defaults to the configured MMFP_LOG_LEVEL
    """
    global _configured

    if level is None:
        from .config_manager import config
        level = config.log_level
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING

    root = logging.getLogger(ROOT_LOGGER)
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(_TagFormatter("[%(tag)s] %(message)s"))
        root.addHandler(handler)
        _configured = True
    root.setLevel(level)
