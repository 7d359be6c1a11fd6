"""Text, JSON and CSV encoders for run results."""

import csv
import json
from dataclasses import asdict
from typing import IO, Iterable, List, Optional

from ..core.events import VisEvent, event_to_dict, format_event
from ..core.runner import RunReport, VerifySummary

CSV_HEADER_COMMENT = "# viswork-bench v1"
CSV_COLUMNS = [
    "family", "n", "r", "r_out", "algo", "s", "seed", "access_count", "ws_peak",
    "depth_peak", "wall_ns", "retries", "passes", "digest",
]


def format_text(events: Iterable[VisEvent]) -> str:
    """One event per line, exact rationals."""
    return "".join(format_event(e) + "\n" for e in events)


def format_json(events: List[VisEvent], report: Optional[RunReport] = None) -> str:
    """Events plus run counters as an indented JSON document."""
    doc = {"events": [event_to_dict(e) for e in events]}
    if report is not None:
        doc["report"] = asdict(report)
    return json.dumps(doc, indent=2)


def format_verify_json(summary: VerifySummary) -> str:
    return json.dumps(summary.to_dict(), indent=2)


def write_csv(reports: Iterable[RunReport], stream: IO[str]) -> None:
    """Versioned bench CSV: a header comment, the column row, one row per run."""
    stream.write(CSV_HEADER_COMMENT + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow(report.csv_row())


def read_csv(stream: IO[str]) -> List[dict]:
    """Parse a bench CSV back into dicts, checking the schema version."""
    first = stream.readline().strip()
    if first != CSV_HEADER_COMMENT:
        raise ValueError(f"not a viswork bench file: {first!r}")
    return list(csv.DictReader(stream))
