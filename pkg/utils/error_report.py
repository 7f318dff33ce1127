"""
UTIL: Error Reporter
PURPOSE: Uniform failure reporting for nodes and the CLI. Logs the error with its node tag
         and appends one JSON line to errors.jsonl next to the log file.
"""

import json
import os
from datetime import datetime, timezone

from utils.logger import LOG_PATH, log_error

PROJECT_NAME = "Steering Ellipsoid Lab"
ERRORS_PATH = os.path.join(os.path.dirname(LOG_PATH) or ".", "errors.jsonl") if LOG_PATH else ""


def report_error(error_message: str, node_name: str = "Unknown") -> None:
    """Log an error and persist it for later inspection."""
    log_error(f"[{node_name}] ❌ {error_message[:500]}")
    if not ERRORS_PATH:
        return

    record = {
        "project": PROJECT_NAME,
        "node": node_name,
        "error": error_message[:500],
        "time": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    try:
        with open(ERRORS_PATH, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")
    except OSError as e:
        log_error(f"Failed to write error record: {e}")
