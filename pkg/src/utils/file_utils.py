"""
File I/O utility functions for scan outputs and scenario side files
"""

import json
import logging
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)


def load_json_file(file_path: Path) -> Any:
    """Parse a JSON file; OSError and json.JSONDecodeError propagate"""
    try:
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        logger.error(f"Error loading {file_path}: {e}")
        raise


def save_json_file(file_path: Path, data: Any) -> None:
    """Write indented JSON; raises OSError on failure"""
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(data, f, indent=2, allow_nan=False)
            f.write("\n")
    except OSError as e:
        logger.error(f"Error saving {file_path}: {e}")
        raise
