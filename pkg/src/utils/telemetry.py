"""
Run telemetry: one JSON line per scan, zero search, claim check or
reconstruction, appended to logs/telemetry.log.
"""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any, Dict, Iterator

import numpy as np

from config import LOGS_DIR

TELEMETRY_LOG_PATH = LOGS_DIR / "telemetry.log"

_logger = logging.getLogger("telemetry")
_logger.propagate = False
if not _logger.handlers:
    LOGS_DIR.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(TELEMETRY_LOG_PATH, encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(message)s"))
    _logger.addHandler(handler)
    _logger.setLevel(logging.INFO)


def _jsonable(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def record_event(event_type: str, payload: Dict[str, Any]) -> None:
    """
    Write a telemetry event as JSON line.
    """
    event = {
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "event_type": event_type,
        **payload,
    }
    try:
        _logger.info(json.dumps(event, default=_jsonable))
    except Exception:
        # Telemetry failures never abort a computation.
        pass


@contextmanager
def timed_event(event_type: str, payload: Dict[str, Any]) -> Iterator[Dict[str, Any]]:
    """Record `event_type` with the elapsed seconds once the block finishes.

    The yielded dict can be filled with result fields inside the block.
    """
    extra: Dict[str, Any] = {}
    start = time.perf_counter()
    try:
        yield extra
    finally:
        record_event(
            event_type,
            {**payload, **extra, "elapsed_s": round(time.perf_counter() - start, 6)},
        )


__all__ = ["record_event", "timed_event"]
