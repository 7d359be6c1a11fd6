"""
Full-memory reference for the visibility polygon.

Brute force with unrestricted memory: test every vertex against every edge,
shoot every shadow against every edge, then sort by angle. Only the exact
geometry predicates are shared with the algorithms under test.
"""

from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Tuple

from ..core.errors import ChainNotIndependent, DegenerateInput, InternalError
from ..core.events import P0Event, ShadowEvent, VertexEvent, VisEvent
from ..core.geometry import (
    HitKind,
    Point,
    PseudoAngle,
    cmp_ccw_angle,
    cross,
    format_point,
    in_cone,
    orient,
    ray_segment_intersection,
    same_direction,
    segments_cross_properly,
)
from ..core.polygon_store import BoundaryPoint, Chain, EdgePoint, PolygonHandle, VertexPoint

# (boundary point, coordinates)
_Node = Tuple[BoundaryPoint, Point]


def _reflex_side(verts, q: Point, i: int) -> int:
    """+1 for an L-type reflex vertex, -1 for R-type, 0 otherwise."""
    n = len(verts)
    a, v, b = verts[i - 1], verts[i], verts[(i + 1) % n]
    if cross(v.x - a.x, v.y - a.y, b.x - v.x, b.y - v.y) >= 0:
        return 0
    dx, dy = v.x - q.x, v.y - q.y
    sa = cross(dx, dy, a.x - q.x, a.y - q.y)
    sb = cross(dx, dy, b.x - q.x, b.y - q.y)
    if sa == 0 or sb == 0:
        raise DegenerateInput(f"an edge at vertex {i} is collinear with the viewpoint")
    if (sa > 0) != (sb > 0):
        return 0
    return 1 if sa > 0 else -1


def _chain_nodes(h: PolygonHandle, c: Chain) -> List[_Node]:
    """All boundary points of the chain from start to end, materialized."""
    verts = h.vertices
    n = h.n

    def coord(bp: BoundaryPoint) -> Fraction:
        return Fraction(bp.index) if isinstance(bp, VertexPoint) else bp.edge + bp.param

    def pt(bp: BoundaryPoint) -> Point:
        return verts[bp.index] if isinstance(bp, VertexPoint) else bp.point

    s = coord(c.start)
    length = Fraction(n) if c.start == c.end else (coord(c.end) - s) % n
    nodes = [(c.start, pt(c.start))]
    first = int(s) + 1
    for step in range(n + 1):
        i = (first + step) % n
        offset = (Fraction(first + step) - s)
        if offset >= length:
            break
        nodes.append((VertexPoint(i), verts[i]))
    nodes.append((c.end, pt(c.end)))
    return nodes


def _visible(q: Point, target: Point, nodes: List[_Node]) -> bool:
    # only pieces with endpoints strictly on both sides of the sight line can block it
    sides = [orient(q, target, p) for _, p in nodes]
    for j in range(len(nodes) - 1):
        if sides[j] * sides[j + 1] < 0 and segments_cross_properly(q, target, nodes[j][1], nodes[j + 1][1]):
            return False
    return True


def _shoot_beyond(q: Point, v: Point, nodes: List[_Node], i: int) -> Tuple[Fraction, int, Point, BoundaryPoint]:
    """Nearest crossing of the ray q->v strictly beyond v: (t, edge, point, node hit or None)."""
    best = None
    for (ba, a), (bb, b) in zip(nodes, nodes[1:]):
        if a == v or b == v:
            continue
        hit = ray_segment_intersection(q, v, a, b)
        if hit is None or hit.t <= 1:
            continue
        touched = None
        if hit.kind is HitKind.ENDPOINT_TOUCH:
            touched = ba if hit.u == 0 else bb
            if isinstance(touched, VertexPoint):
                raise DegenerateInput(f"vertices {i} and {touched.index} are collinear with the viewpoint")
        if best is None or hit.t < best[0]:
            edge = ba.index if isinstance(ba, VertexPoint) else ba.edge
            best = (hit.t, edge, hit.point, touched)
    if best is None:
        raise InternalError(f"ray through vertex {i} never met the boundary")
    return best


def _p0(h: PolygonHandle) -> EdgePoint:
    q = h.q
    through = Point(q.x + 1, q.y)
    best = None
    n = h.n
    for i in range(n):
        hit = ray_segment_intersection(q, through, h.vertices[i], h.vertices[(i + 1) % n])
        if hit is not None and (best is None or hit.t < best[0].t):
            best = (hit, i)
    if best is None:
        raise InternalError("horizontal ray from the viewpoint never met the boundary")
    hit, edge = best
    if hit.kind is HitKind.ENDPOINT_TOUCH:
        raise DegenerateInput("horizontal ray from the viewpoint hits a vertex")
    return EdgePoint(edge, hit.point, None, hit.u)


def _endpoint_event(h: PolygonHandle, bp: BoundaryPoint) -> Optional[VisEvent]:
    if isinstance(bp, VertexPoint):
        return VertexEvent(bp.index)
    if bp.provenance is None:
        return P0Event(bp.point)
    q = h.q
    v = h.vertices[bp.provenance]
    dx, dy = v.x - q.x, v.y - q.y
    if (bp.point.x - q.x) * dx + (bp.point.y - q.y) * dy > dx * dx + dy * dy:
        return ShadowEvent(bp.provenance, bp.edge, bp.point)
    return None


def _sorted_events(h: PolygonHandle, ref: PseudoAngle,
                   items: List[Tuple[Point, int, VisEvent]]) -> List[VisEvent]:
    # items are (point, tie rank, event); equal angles only within a vertex/shadow pair
    q = h.q

    def compare(a, b) -> int:
        order = int(cmp_ccw_angle(q, ref, a[0], b[0]))
        if order:
            return order
        return (a[1] > b[1]) - (a[1] < b[1])

    out: List[VisEvent] = []
    seen = set()
    for item in sorted(items, key=cmp_to_key(compare)):
        if item[2] not in seen:
            seen.add(item[2])
            out.append(item[2])
    return out


def oracle_vis_chain(h: PolygonHandle, c: Chain) -> List[VisEvent]:
    """
    Canonical events of an independent chain, computed by brute force.

    The start and end are included when they are output events (a vertex,
    p0 or a shadow); interior visible vertices and their shadows follow in
    angular order from the start direction.

    Raises:
        ChainNotIndependent: If an endpoint is hidden
    """
    q = h.q
    nodes = _chain_nodes(h, c)
    for name, (_, p) in (("start", nodes[0]), ("end", nodes[-1])):
        if not _visible(q, p, nodes):
            raise ChainNotIndependent(f"chain {name} {format_point(p)} is not visible from the viewpoint")

    items: List[Tuple[Point, int, VisEvent]] = []
    # The start sorts first and the end last among points on their rays
    for bp, p, tie in ((c.start, nodes[0][1], -1), (c.end, nodes[-1][1], 2)):
        event = _endpoint_event(h, bp)
        if event is not None:
            items.append((p, tie, event))

    for bp, p in nodes[1:-1]:
        if not _visible(q, p, nodes):
            continue
        i = bp.index
        side = _reflex_side(h.vertices, q, i)
        if side == 0:
            items.append((p, 0, VertexEvent(i)))
            continue
        _, edge, point, touched = _shoot_beyond(q, p, nodes, i)
        if touched is not None:
            shadow = _endpoint_event(h, touched)
        else:
            shadow = ShadowEvent(i, edge, point)
        # R-type: vertex then shadow; L-type: shadow then vertex
        items.append((p, 0 if side < 0 else 1, VertexEvent(i)))
        if shadow is not None:
            items.append((point, 1 if side < 0 else 0, shadow))

    return _sorted_events(h, PseudoAngle.towards(q, nodes[0][1]), items)


def oracle_vis(h: PolygonHandle) -> List[VisEvent]:
    """Canonical visibility polygon: P0 followed by visible vertices and shadows in angular order."""
    p0 = _p0(h)
    return oracle_vis_chain(h, Chain(p0, p0, wraps=True))


def oracle_candidates(h: PolygonHandle, c: Chain) -> List[Tuple[int, Point]]:
    """Reflex vertices of the chain strictly inside its cone."""
    q = h.q
    nodes = _chain_nodes(h, c)
    a, b = nodes[0][1], nodes[-1][1]
    out = []
    for bp, p in nodes[1:-1]:
        if _reflex_side(h.vertices, q, bp.index) == 0:
            continue
        if same_direction(q, a, p) or same_direction(q, b, p):
            continue
        if in_cone(q, a, b, p):
            out.append((bp.index, p))
    return out


def rank_oracle(h: PolygonHandle, c: Chain, v: int) -> Tuple[int, int]:
    """(smaller, greater) counts of candidates by angle from the chain start, relative to v."""
    q = h.q
    ref = PseudoAngle.towards(q, _chain_nodes(h, c)[0][1])
    pv = h.vertices[v]
    smaller = greater = 0
    for idx, p in oracle_candidates(h, c):
        if idx == v:
            continue
        order = cmp_ccw_angle(q, ref, p, pv)
        if order < 0:
            smaller += 1
        elif order > 0:
            greater += 1
    return smaller, greater
