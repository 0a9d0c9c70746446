"""The logging configuration for the ranksmith package."""

from __future__ import annotations

import os
import sys
from datetime import datetime
from logging import DEBUG, Formatter, Logger, LogRecord, StreamHandler, getLevelName, getLogger

from pythonjsonlogger.json import JsonFormatter


def _structured_logging_requested() -> bool:
    return os.getenv("RANKSMITH_LOG_FORMAT", "").lower() == "json" or bool(
        os.getenv("BATCH_TASK_INDEX") or os.getenv("RUNNING_IN_CLOUD_BATCH"),
    )


def _requested_level() -> int | str:
    level = os.getenv("RANKSMITH_LOG_LEVEL")
    if not level:
        return DEBUG
    resolved = getLevelName(level.upper())
    return resolved if isinstance(resolved, int) else DEBUG


class _Rfc3339JsonFormatter(JsonFormatter):
    def formatTime(self, record: LogRecord, datefmt: str | None = None) -> str:  # noqa: ARG002, N802
        isoformat = datetime.fromtimestamp(record.created).isoformat()  # noqa: DTZ006
        return f"{isoformat}Z"


logger: Logger = getLogger("ranksmith")
logger.setLevel(_requested_level())
logger.handlers.clear()

stream_handler = StreamHandler(sys.stdout)

formatter: Formatter

if _structured_logging_requested():
    formatter = _Rfc3339JsonFormatter(
        "%(asctime)s %(levelname)s %(threadName)s %(message)s",
        rename_fields={
            "levelname": "severity",
            "asctime": "timestamp",
        },
    )
else:
    formatter = Formatter(
        "%(asctime)s | %(name)s | %(levelname)s | [%(threadName)s] %(message)s",
        "%Y-%m-%d %H:%M:%S",
    )

stream_handler.setFormatter(formatter)
logger.addHandler(stream_handler)
