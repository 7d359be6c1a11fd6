"""Logging utilities for viswork."""

import logging
import sys
from typing import IO, Optional

ROOT_LOGGER = 'viswork'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class _StderrHandler(logging.StreamHandler):
    """Stream handler that resolves sys.stderr at emit time unless given a stream."""

    def __init__(self, stream: Optional[IO[str]] = None):
        super().__init__(stream)
        self._fixed = stream is not None

    def emit(self, record: logging.LogRecord) -> None:
        if not self._fixed:
            self.stream = sys.stderr
        super().emit(record)


def setup_logger(name: str = ROOT_LOGGER, level: int = logging.INFO,
                 stream: Optional[IO[str]] = None) -> logging.Logger:
    """
    Set up a logger with consistent formatting.

    Calling it again replaces the handler it installed before, so the level
    and stream follow the latest call.

    Args:
        name: Logger name
        level: Logging level
        stream: Output stream; stderr when omitted, keeping stdout for results

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.propagate = False

    for existing in list(logger.handlers):
        if isinstance(existing, _StderrHandler):
            logger.removeHandler(existing)

    handler = _StderrHandler(stream)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
    logger.addHandler(handler)
    return logger


def verbosity_level(verbose: bool) -> int:
    """DEBUG with --verbose, otherwise only warnings and errors."""
    return logging.DEBUG if verbose else logging.WARNING


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Get a logger under the viswork namespace.

    Args:
        name: Module name; names outside the namespace are nested under it

    Returns:
        Logger instance
    """
    if name is None or name == ROOT_LOGGER:
        return logging.getLogger(ROOT_LOGGER)
    if not name.startswith(ROOT_LOGGER + '.'):
        name = f'{ROOT_LOGGER}.{name}'
    return logging.getLogger(name)


def fields(**values) -> str:
    """Render keyword values as ``key=value`` pairs in call order."""
    return ' '.join(f'{key}={value}' for key, value in values.items())
