"""JSON and CSV serialisation of run reports.

Both formats carry the fixed record columns in the same order.  The JSON
document is a single object with ``config``, ``records`` and ``summary``;
CSV is RFC 4180 (CRLF line ends, minimal quoting) with empty cells for
absent values.  ``parse_report`` inverts either format.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .runner import RECORD_FIELDS, VERDICTS, Record, RunReport

__all__ = ["FORMATS", "render_report", "emit_report", "parse_report"]

FORMATS = ("json", "csv")

_INT_FIELDS = {"n", "evals"}
_STR_FIELDS = {"check", "function", "verdict"}


def _render_json(report: RunReport) -> str:
    doc = {
        "config": report.config,
        "records": [r.to_dict() for r in report.records],
        "summary": report.summary,
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(RECORD_FIELDS)
    for r in report.records:
        writer.writerow([_cell(getattr(r, name)) for name in RECORD_FIELDS])
    return buf.getvalue()


def render_report(report: RunReport, fmt: str = "json") -> str:
    if fmt == "json":
        return _render_json(report)
    if fmt == "csv":
        return _render_csv(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit_report(report: RunReport, fmt: str, path: str | Path) -> None:
    """Write the report; I/O errors propagate as ``OSError``."""
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _typed(name: str, raw):
    if raw is None or raw == "":
        return None
    if name in _STR_FIELDS:
        return str(raw)
    if name in _INT_FIELDS:
        return int(raw)
    return float(raw)


def parse_report(text: str, fmt: str = "json") -> RunReport:
    """Rebuild a report from its rendered text (CSV carries no config echo)."""
    if fmt == "json":
        doc = json.loads(text)
        rows = doc["records"]
        config = doc["config"]
    elif fmt == "csv":
        reader = csv.DictReader(io.StringIO(text, newline=""))
        if tuple(reader.fieldnames or ()) != RECORD_FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = list(reader)
        config = {}
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    records = []
    for row in rows:
        values = {name: _typed(name, row.get(name)) for name in RECORD_FIELDS}
        if values["verdict"] not in VERDICTS:
            raise ValueError(f"unknown verdict {values['verdict']!r}")
        records.append(Record(**values))
    return RunReport(config, records)
