"""SVG scene of a polygon and its visibility polygon."""

import xml.etree.ElementTree as ET
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..core.events import P0Event, ShadowEvent, VertexEvent, VisEvent
from ..core.polygon_store import PolygonHandle

CANVAS = 800
MARGIN = 20


def _num(value: float) -> str:
    # 1e-9 display precision
    return f"{value:.9f}".rstrip("0").rstrip(".")


class SceneTransform:
    """Maps polygon coordinates to canvas pixels, y pointing up."""

    def __init__(self, points: Sequence[Tuple[Fraction, Fraction]]):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        self.min_x, self.max_y = min(xs), max(ys)
        span = max(max(xs) - self.min_x, self.max_y - min(ys), Fraction(1))
        self.scale = Fraction(CANVAS - 2 * MARGIN) / span

    def __call__(self, x: Fraction, y: Fraction) -> Tuple[str, str]:
        px = MARGIN + (x - self.min_x) * self.scale
        py = MARGIN + (self.max_y - y) * self.scale
        return _num(float(px)), _num(float(py))


def svgroot(w: int, h: int) -> ET.Element:
    return ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      version="1.1",
                      width="{}px".format(w),
                      height="{}px".format(h),
                      viewBox="0 0 {} {}".format(w, h))


def svglineloop(parent: ET.Element, points: List[Tuple[str, str]], **attrs) -> ET.Element:
    d = "M{} {}".format(*points[0])
    for p in points[1:]:
        d += "L{} {}".format(*p)
    d += "z"
    return ET.SubElement(parent, "path", d=d, **attrs)


def svgmarker(parent: ET.Element, at: Tuple[str, str], radius: int, cls: str) -> ET.Element:
    return ET.SubElement(parent, "circle", cx=at[0], cy=at[1], r=str(radius), **{"class": cls})


def event_points(h: PolygonHandle, events: Sequence[VisEvent]) -> List[Tuple[Fraction, Fraction]]:
    out = []
    for e in events:
        if isinstance(e, VertexEvent):
            v = h.vertices[e.index]
            out.append((v.x, v.y))
        else:
            out.append((e.point.x, e.point.y))
    return out


def render_svg(h: PolygonHandle, events: Sequence[VisEvent]) -> str:
    """
    Render the polygon outline, the filled visibility polygon and markers.

    Args:
        h: Polygon handle
        events: Canonical event sequence

    Returns:
        SVG document as a string
    """
    transform = SceneTransform([(v.x, v.y) for v in h.vertices])
    root = svgroot(CANVAS, CANVAS)
    ET.SubElement(root, "title").text = f"visibility polygon, n={h.n}"

    svglineloop(root, [transform(v.x, v.y) for v in h.vertices],
                id="polygon", fill="none", stroke="black")
    vis = event_points(h, events)
    if vis:
        svglineloop(root, [transform(x, y) for x, y in vis],
                    id="visibility", fill="gold", stroke="orange", **{"fill-opacity": "0.5"})

    markers = ET.SubElement(root, "g", id="markers")
    svgmarker(markers, transform(h.q.x, h.q.y), 5, "viewpoint")
    for e in events:
        if isinstance(e, P0Event):
            svgmarker(markers, transform(e.point.x, e.point.y), 4, "p0")
        elif isinstance(e, ShadowEvent):
            svgmarker(markers, transform(e.point.x, e.point.y), 3, "shadow")
    return ET.tostring(root, encoding="unicode")
