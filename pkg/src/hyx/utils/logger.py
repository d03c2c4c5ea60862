"""
Centralized Logging Configuration

Every hyx module logs through a rich console handler bound to standard
error. Standard output is reserved for document bytes, ids and report lines,
so nothing here ever writes to it.

Log level comes from the ``level`` argument, else the LOG_LEVEL environment
variable, else INFO. The CLI re-levels all hyx loggers at once with
``set_level`` when -v or -q is given.

Usage:
    from hyx.utils.logger import setup_logger

    logger = setup_logger(__name__)
    logger.info("Store initialised at [cyan].hyx[/cyan]")
"""

import logging
import os

from rich.console import Console
from rich.logging import RichHandler

ROOT_NAME = "hyx"

_configured: set[str] = set()


def _numeric_level(level: str | None) -> int:
    if level is None:
        level = os.getenv("LOG_LEVEL", "INFO")
    return getattr(logging, level.upper(), logging.INFO)


def setup_logger(name: str, level: str | None = None) -> logging.Logger:
    """
    Configure and return a logger writing rich-formatted records to stderr.

    Args:
        name: Logger name (typically __name__ from calling module)
        level: Optional log level override. If not provided, uses LOG_LEVEL env var or defaults to INFO

    Returns:
        Configured logger instance with RichHandler
    """
    logger = logging.getLogger(name)

    # Already configured: keep its handler and level
    if logger.handlers:
        return logger

    logger.setLevel(_numeric_level(level))

    handler = RichHandler(
        console=Console(stderr=True),
        show_time=True,
        show_path=False,
        markup=True,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter(fmt="%(message)s", datefmt="[%Y-%m-%d %H:%M:%S]"))
    logger.addHandler(handler)

    # Handler is attached per module; avoid duplicates through the root logger
    logger.propagate = False
    _configured.add(name)

    return logger


def get_logger(name: str) -> logging.Logger:
    """Alias for setup_logger()."""
    return setup_logger(name)


def set_level(level: str) -> None:
    """Re-level every hyx logger configured so far."""
    numeric_level = _numeric_level(level)
    for name in _configured:
        if name == ROOT_NAME or name.startswith(ROOT_NAME + "."):
            logging.getLogger(name).setLevel(numeric_level)
