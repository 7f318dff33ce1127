"""
UTIL: Logger
PURPOSE: Structured logging with timestamps. Logs to stderr (colorized) + file (steering.log).
         stdout is reserved for CSV / JSON results.
"""

import logging
import os
import sys
import colorlog

from utils.config import LOG_FILE, LOG_LEVEL

LOG_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
LOG_PATH = os.path.join(LOG_DIR, LOG_FILE) if LOG_FILE and not os.path.isabs(LOG_FILE) else LOG_FILE

# ── Formatter ────────────────────────────────────────────────
FILE_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"
CONSOLE_FORMAT = "%(log_color)s%(asctime)s | %(message)s"

DATE_FORMAT_FILE = "%Y-%m-%d %H:%M:%S"
DATE_FORMAT_CONSOLE = "%H:%M:%S"

COLORS = {
    'DEBUG':    'cyan',
    'INFO':     'green',
    'WARNING':  'yellow',
    'ERROR':    'red',
    'CRITICAL': 'red,bg_white',
}


def get_logger(name: str = "steering") -> logging.Logger:
    """Return a configured logger instance."""
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    logger.setLevel(logging.DEBUG)
    logger.propagate = False

    console = logging.StreamHandler(sys.stderr)
    console.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    console.setFormatter(colorlog.ColoredFormatter(
        CONSOLE_FORMAT,
        datefmt=DATE_FORMAT_CONSOLE,
        log_colors=COLORS,
        reset=True,
    ))
    logger.addHandler(console)

    if LOG_PATH:
        try:
            file_handler = logging.FileHandler(LOG_PATH, encoding="utf-8")
        except OSError as e:
            logger.warning(f"[Logger] File log disabled: {e}")
        else:
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(FILE_FORMAT, datefmt=DATE_FORMAT_FILE))
            logger.addHandler(file_handler)

    return logger


def set_console_level(level: int) -> None:
    """Adjust the console handler threshold (used by --verbose)."""
    for handler in _log.handlers:
        if not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)


# ── Convenience shortcuts ────────────────────────────────────
_log = get_logger()

log_info = _log.info
log_error = _log.error
log_warning = _log.warning
log_debug = _log.debug


def log_section(title: str):
    """Print a visual separator line to the log."""
    _log.info(f"{'─'*15} {title} {'─'*15}")
