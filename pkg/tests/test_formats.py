import io
import json

import pytest

from viswork.core.events import (
    P0Event,
    ShadowEvent,
    event_to_dict,
    events_digest,
    format_event,
    parse_event,
)
from viswork.core.errors import PolygonParseError
from viswork.core.runner import run
from viswork.output.formats import CSV_COLUMNS, CSV_HEADER_COMMENT, format_json, format_text, read_csv, write_csv

from .conftest import L6_EVENTS, L6_TEXT


def test_text(l6):
    assert format_text(L6_EVENTS) == L6_TEXT


def test_event_lines_parse_back():
    assert [parse_event(line) for line in L6_TEXT.splitlines()] == L6_EVENTS


@pytest.mark.parametrize("line", ["", "V", "V x", "S 1 2 3", "Q 1 2", "P0 1/0 2"])
def test_bad_event_lines(line):
    with pytest.raises(PolygonParseError):
        parse_event(line)


def test_event_text_forms():
    shadow = L6_EVENTS[3]
    assert isinstance(shadow, ShadowEvent)
    assert format_event(shadow) == "S 3 4 2/3 4"
    assert event_to_dict(shadow) == {"type": "S", "reflex": 3, "edge": 4, "x": "2/3", "y": "4"}
    assert event_to_dict(L6_EVENTS[0]) == {"type": "P0", "x": "4", "y": "1/2"}
    assert isinstance(L6_EVENTS[0], P0Event)


def test_digest_is_over_the_text_form():
    import hashlib
    assert events_digest(L6_EVENTS) == hashlib.sha256(L6_TEXT.encode()).hexdigest()
    assert events_digest([]) == hashlib.sha256(b"").hexdigest()


def test_json(l6):
    events, report = run(l6, "const")
    doc = json.loads(format_json(events, report))
    assert doc["events"][1] == {"type": "V", "index": 2}
    assert doc["report"]["digest"] == report.digest
    assert "report" not in json.loads(format_json(events))


def test_csv(l6):
    _, report = run(l6, "dnc-det", family="l6")
    buf = io.StringIO()
    write_csv([report, report], buf)
    text = buf.getvalue()
    assert text.startswith(CSV_HEADER_COMMENT + "\n" + ",".join(CSV_COLUMNS) + "\n")
    rows = read_csv(io.StringIO(text))
    assert len(rows) == 2
    assert rows[0]["family"] == "l6"
    assert rows[0]["algo"] == "dnc-det"
    assert rows[0]["digest"] == report.digest
    assert int(rows[0]["ws_peak"]) == report.ws_peak


def test_csv_version_check():
    with pytest.raises(ValueError):
        read_csv(io.StringIO("family,n\n"))
