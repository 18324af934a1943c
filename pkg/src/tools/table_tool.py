import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, Field

from src.state.types import ScanRecord
from src.utils.file_utils import save_json_file

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["t", "entropy", "eof", "abs_delta", "ddelta", "cond"]
CSV_FLOAT_FORMAT = "%.17g"


class TableToolInput(BaseModel):
    """Input for writing scan records"""

    format: Literal["csv", "json"] = Field(
        default="csv", description="Output format: 'csv' for plotting, 'json' for full records"
    )
    path: Optional[Path] = Field(
        default=None, description="Destination file; None renders to a string only"
    )
    scenario: str = Field(default="scenario", description="Scenario label for JSON output")
    overrides: Dict[str, float] = Field(
        default_factory=dict, description="Tolerance overrides to note in the output header"
    )


def records_to_dataframe(records: Sequence[ScanRecord]) -> pd.DataFrame:
    """One row per grid point with the plotted columns; absent values are NaN."""
    rows = [
        {
            "t": r.t,
            "entropy": r.entropy,
            "eof": r.eof,
            "abs_delta": r.abs_delta,
            "ddelta": r.ddelta,
            "cond": r.cond,
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=CSV_COLUMNS).astype("float64")


def render_csv(records: Sequence[ScanRecord], overrides: Optional[Dict[str, float]] = None) -> str:
    buffer = io.StringIO()
    for name, value in sorted((overrides or {}).items()):
        buffer.write(f"# tolerance override {name}={value!r}\n")
    records_to_dataframe(records).to_csv(
        buffer, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="", lineterminator="\n"
    )
    return buffer.getvalue()


def render_json_payload(
    records: Sequence[ScanRecord], scenario: str, overrides: Optional[Dict[str, float]] = None
) -> Dict[str, object]:
    return {
        "scenario": scenario,
        "tolerance_overrides": dict(sorted((overrides or {}).items())),
        "records": [r.model_dump() for r in records],
    }


class TableTool:
    """Write scan records as CSV (plot columns) or JSON (full records)"""

    name: str = "emit_records"

    def run(self, records: List[ScanRecord], params: TableToolInput) -> str:
        if not records:
            raise ValueError("no records to emit")

        if params.format == "csv":
            content = render_csv(records, params.overrides)
            if params.path is not None:
                params.path.parent.mkdir(parents=True, exist_ok=True)
                with open(params.path, "w", encoding="utf-8", newline="") as f:
                    f.write(content)
                logger.info(f"Table saved to {params.path}")
            return content

        payload = render_json_payload(records, params.scenario, params.overrides)
        if params.path is not None:
            save_json_file(params.path, payload)
            logger.info(f"Records saved to {params.path}")
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def emit(
    records: List[ScanRecord],
    format: Literal["csv", "json"],
    path: Optional[Path],
    scenario: str = "scenario",
    overrides: Optional[Dict[str, float]] = None,
) -> str:
    """Render records, writing them to path when one is given; returns the rendered text."""
    params = TableToolInput(format=format, path=path, scenario=scenario, overrides=overrides or {})
    return TableTool().run(records, params)
