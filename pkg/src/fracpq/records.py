"""Result records and their CSV/JSON serializations.

JSON keeps full binary precision (floats are written with repr, so they
re-parse to the same double).  CSV tables carry 12 significant digits.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

SCHEMA_VERSION = 1
CSV_DIGITS = 12


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class ResultRecord:
    command: str
    inputs: dict
    outputs: dict
    diagnostics: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    version: str = ""
    timestamp: str = field(default_factory=_now)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        data = json.loads(text)
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version!r}")
        return cls(**data)

    def to_csv(self) -> str:
        return format_csv(self.columns, self.rows)


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{CSV_DIGITS}g}"
    return str(v)


def format_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _parse_cell(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def parse_csv(text: str):
    """Inverse of :func:`format_csv`: (columns, rows) with numbers restored."""
    reader = csv.reader(io.StringIO(text))
    columns = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return columns, rows


def rounded(v):
    """The value a CSV cell re-parses to."""
    return _parse_cell(format_value(v))
