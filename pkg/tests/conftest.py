"""Shared fixtures: two small hand-checked polygons."""

from fractions import Fraction

import pytest

from viswork.core.events import P0Event, ShadowEvent, VertexEvent
from viswork.core.geometry import Point
from viswork.core.polygon_store import load

L6_VERTICES = [Point(0, 0), Point(4, 0), Point(4, 2), Point(2, 2), Point(2, 4), Point(0, 4)]
L6_Q = Point(3, Fraction(1, 2))
L6_EVENTS = [
    P0Event(Point(4, Fraction(1, 2))),
    VertexEvent(2),
    VertexEvent(3),
    ShadowEvent(3, 4, Point(Fraction(2, 3), 4)),
    VertexEvent(5),
    VertexEvent(0),
    VertexEvent(1),
]
L6_TEXT = "P0 4 1/2\nV 2\nV 3\nS 3 4 2/3 4\nV 5\nV 0\nV 1\n"

SQ4_VERTICES = [Point(0, 0), Point(4, 0), Point(4, 4), Point(0, 4)]
SQ4_Q = Point(2, 2)
SQ4_EVENTS = [P0Event(Point(4, 2)), VertexEvent(2), VertexEvent(3), VertexEvent(0), VertexEvent(1)]



@pytest.fixture
def l6():
    """L-shaped hexagon whose reflex corner hides vertex 4."""
    return load(L6_VERTICES, L6_Q)


@pytest.fixture
def sq4():
    return load(SQ4_VERTICES, SQ4_Q)


@pytest.fixture
def l6_file(tmp_path):
    from viswork.core.polygon_store import write_polygon
    path = tmp_path / "l6.poly"
    write_polygon(path, L6_VERTICES, L6_Q, comment="L-shape")
    return path
