"""Visibility-polygon output events and their exact text form."""

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Union

from .errors import PolygonParseError
from .geometry import Point, format_scalar


@dataclass(frozen=True)
class P0Event:
    """The angular origin: first hit of the +x ray from q."""

    point: Point


@dataclass(frozen=True)
class VertexEvent:
    """A visible input vertex."""

    index: int


@dataclass(frozen=True)
class ShadowEvent:
    """Shadow of visible reflex vertex ``reflex`` on edge ``edge``."""

    reflex: int
    edge: int
    point: Point


VisEvent = Union[P0Event, VertexEvent, ShadowEvent]
EventSink = Callable[[VisEvent], None]


def format_event(event: VisEvent) -> str:
    """Text form: ``P0 x y``, ``V i`` or ``S reflex edge x y``."""
    if isinstance(event, P0Event):
        return f"P0 {format_scalar(event.point.x)} {format_scalar(event.point.y)}"
    if isinstance(event, VertexEvent):
        return f"V {event.index}"
    return (f"S {event.reflex} {event.edge} "
            f"{format_scalar(event.point.x)} {format_scalar(event.point.y)}")


def parse_event(line: str) -> VisEvent:
    """Inverse of :func:`format_event`."""
    parts = line.split()
    try:
        if parts[0] == 'P0' and len(parts) == 3:
            return P0Event(Point(Fraction(parts[1]), Fraction(parts[2])))
        if parts[0] == 'V' and len(parts) == 2:
            return VertexEvent(int(parts[1]))
        if parts[0] == 'S' and len(parts) == 5:
            return ShadowEvent(int(parts[1]), int(parts[2]),
                               Point(Fraction(parts[3]), Fraction(parts[4])))
    except (ValueError, ZeroDivisionError, IndexError):
        pass
    raise PolygonParseError(f"not an event line: {line!r}")


def event_to_dict(event: VisEvent) -> dict:
    if isinstance(event, P0Event):
        return {"type": "P0", "x": format_scalar(event.point.x), "y": format_scalar(event.point.y)}
    if isinstance(event, VertexEvent):
        return {"type": "V", "index": event.index}
    return {
        "type": "S",
        "reflex": event.reflex,
        "edge": event.edge,
        "x": format_scalar(event.point.x),
        "y": format_scalar(event.point.y),
    }


def events_digest(events: Iterable[VisEvent]) -> str:
    """SHA-256 over the newline-terminated text form of the sequence."""
    digest = hashlib.sha256()
    for event in events:
        digest.update(format_event(event).encode('utf-8'))
        digest.update(b"\n")
    return digest.hexdigest()


def shadow_count(events: Iterable[VisEvent]) -> int:
    return sum(1 for e in events if isinstance(e, ShadowEvent))


class EventCollector:
    """A sink that keeps the events it receives."""

    def __init__(self):
        self.events: List[VisEvent] = []

    def __call__(self, event: VisEvent) -> None:
        self.events.append(event)
