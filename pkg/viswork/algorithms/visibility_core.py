"""
Geometric primitives on independent chains.

All routines read vertices through the polygon store and charge a fixed
number of workspace words per call, so their space use does not depend on n.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union

from ..core.errors import DegenerateInput, InternalError, InvalidQuery
from ..core.geometry import (
    HitKind,
    Ordering,
    Orientation,
    Point,
    PseudoAngle,
    cmp_ccw_angle,
    format_point,
    orient,
    ray_segment_intersection,
    segments_cross_properly,
)
from ..core.polygon_store import (
    BoundaryPoint,
    Chain,
    EdgePoint,
    PolygonHandle,
    QueryContext,
    VertexPoint,
    end_rel,
    on_chain,
    piece_edge,
    piece_param,
    pieces,
    point_of,
    rel,
    vertex,
    walk,
    ws_scope,
)

# Workspace words per call; nested calls add up.
FIND_P0_WORDS = 6
CLASSIFY_WORDS = 4
IS_VISIBLE_WORDS = 5
RAY_SHOOT_WORDS = 9
SHADOW_TEST_WORDS = 2
SCAN_WORDS = 7
NEXT_VIS_REFLEX_WORDS = 8


class ReflexClass(Enum):
    NOT_REFLEX = "not_reflex"
    REFLEX_R = "reflex_r"
    REFLEX_L = "reflex_l"

    @property
    def is_reflex(self) -> bool:
        return self is not ReflexClass.NOT_REFLEX


@dataclass(frozen=True)
class EndOfChain:
    """No further visible reflex vertex; the walk continues to ``end``."""

    end: BoundaryPoint


@dataclass(frozen=True)
class FoundReflex:
    """Next visible reflex vertex, its shadow and its type."""

    vertex: int
    shadow: BoundaryPoint
    kind: ReflexClass


NextReflexResult = Union[EndOfChain, FoundReflex]


def classify_at(q: Point, pred: Point, v: Point, succ: Point) -> ReflexClass:
    """
    Local reflex test from three consecutive boundary points.

    ``pred``/``succ`` may be any points on the incident edges; only their
    side of the line through q and v matters.

    Raises:
        DegenerateInput: If a neighbour is collinear with q and v
    """
    if orient(pred, v, succ) != Orientation.CW:
        return ReflexClass.NOT_REFLEX
    before = orient(q, v, pred)
    after = orient(q, v, succ)
    if before == Orientation.COLLINEAR or after == Orientation.COLLINEAR:
        raise DegenerateInput(f"an edge at vertex {format_point(v)} is collinear with the viewpoint")
    if before != after:
        return ReflexClass.NOT_REFLEX
    return ReflexClass.REFLEX_R if before == Orientation.CW else ReflexClass.REFLEX_L


def classify_reflex(h: PolygonHandle, i: int, ctx: QueryContext) -> ReflexClass:
    """Classify vertex i using exactly three input accesses."""
    with ws_scope(ctx, CLASSIFY_WORDS):
        pred = vertex(h, (i - 1) % h.n, ctx)
        v = vertex(h, i, ctx)
        succ = vertex(h, (i + 1) % h.n, ctx)
        return classify_at(h.q, pred, v, succ)


def find_p0(h: PolygonHandle, ctx: QueryContext) -> EdgePoint:
    """
    First boundary point hit by the +x ray from q.

    Raises:
        DegenerateInput: If the nearest hit is a vertex or the ray runs along an edge
    """
    q = h.q
    through = Point(q.x + 1, q.y)
    with ws_scope(ctx, FIND_P0_WORDS):
        best = None
        best_edge = -1
        first = vertex(h, 0, ctx)
        a = first
        for i in range(h.n):
            b = vertex(h, i + 1, ctx) if i + 1 < h.n else first
            hit = ray_segment_intersection(q, through, a, b)
            if hit is not None and (best is None or hit.t < best.t):
                best, best_edge = hit, i
            a = b
        if best is None:
            raise InternalError("horizontal ray from the viewpoint never met the boundary")
        if best.kind is HitKind.ENDPOINT_TOUCH:
            raise DegenerateInput(f"horizontal ray from the viewpoint hits vertex {format_point(best.point)}")
        ctx.note_point(best.point)
        return EdgePoint(best_edge, best.point, None, best.u)


def interior_vertices(h: PolygonHandle, c: Chain, ctx: QueryContext,
                      frm: Optional[BoundaryPoint] = None
                      ) -> Iterator[Tuple[int, Point, Fraction, ReflexClass]]:
    """Yield (index, point, offset, class) for vertices strictly between ``frm`` and the end."""
    q = h.q
    prev = None
    cur = None
    for bp, pt, r in walk(h, c, ctx, frm):
        if prev is not None and isinstance(cur[0], VertexPoint):
            yield cur[0].index, cur[1], cur[2], classify_at(q, prev[1], cur[1], pt)
        prev, cur = cur, (bp, pt, r)


def is_visible(h: PolygonHandle, c: Chain, x: BoundaryPoint, ctx: QueryContext) -> bool:
    """True iff no piece of the chain properly crosses the open segment q->x."""
    q = h.q
    with ws_scope(ctx, IS_VISIBLE_WORDS):
        px = point_of(h, x, ctx)
        for _, pa, _, pb in pieces(h, c, ctx):
            if segments_cross_properly(q, px, pa, pb):
                return False
        return True


def _grazes(h: PolygonHandle, i: int, ctx: QueryContext) -> bool:
    pv = vertex(h, i, ctx)
    pred = vertex(h, (i - 1) % h.n, ctx)
    succ = vertex(h, (i + 1) % h.n, ctx)
    return orient(h.q, pv, pred) == orient(h.q, pv, succ)


def ray_shoot(h: PolygonHandle, c: Chain, x: BoundaryPoint, ctx: QueryContext) -> BoundaryPoint:
    """
    Last visible point of the chain on the ray from q through x.

    This is the nearest point where the ray leaves the region: a transversal
    crossing, a chain endpoint on the ray, or a vertex whose neighbours lie on
    opposite sides. A reflex vertex defining the ray is passed over.

    Raises:
        InvalidQuery: If x is not on the chain
        DegenerateInput: If the ray runs along an edge or meets another vertex
    """
    if not on_chain(h, c, x):
        raise InvalidQuery(f"{x} is not on the chain")
    if isinstance(x, EdgePoint):
        return x
    if x == c.start or x == c.end:
        # An endpoint's shadow lies on the chain only for R at the start or L at the end
        kind = classify_reflex(h, x.index, ctx)
        wanted = ReflexClass.REFLEX_R if x == c.start else ReflexClass.REFLEX_L
        if kind is not wanted:
            return x

    q = h.q
    anchor = x.index
    with ws_scope(ctx, RAY_SHOOT_WORDS):
        graze = _grazes(h, anchor, ctx)
        px = vertex(h, anchor, ctx)
        best_t = None
        best: Optional[BoundaryPoint] = None
        for a, pa, b, pb in pieces(h, c, ctx):
            hit = ray_segment_intersection(q, px, pa, pb)
            if hit is None or (best_t is not None and hit.t >= best_t):
                continue
            if hit.kind is HitKind.ENDPOINT_TOUCH:
                touched = a if hit.u == 0 else b
                if isinstance(touched, EdgePoint):
                    best_t, best = hit.t, touched
                elif touched.index != anchor:
                    raise DegenerateInput(
                        f"vertices {anchor} and {touched.index} are collinear with the viewpoint"
                    )
                elif not graze:
                    best_t, best = hit.t, touched
                continue
            a_param = piece_param(a, at_end=False)
            b_param = piece_param(b, at_end=True)
            param = a_param + hit.u * (b_param - a_param)
            best_t = hit.t
            best = EdgePoint(piece_edge(a), hit.point, anchor, param)
        if best is None:
            raise InternalError(f"ray through vertex {anchor} never left the chain")
        if isinstance(best, EdgePoint):
            ctx.note_point(best.point)
        return best


def shadow(h: PolygonHandle, c: Chain, v: int, ctx: QueryContext) -> BoundaryPoint:
    """Shadow of a visible reflex vertex v on chain c."""
    return ray_shoot(h, c, VertexPoint(v), ctx)


def is_shadow_point(h: PolygonHandle, bp: BoundaryPoint, ctx: QueryContext) -> bool:
    """True when bp lies on its constructing ray beyond the constructing vertex."""
    if not isinstance(bp, EdgePoint) or bp.provenance is None:
        return False
    q = h.q
    with ws_scope(ctx, SHADOW_TEST_WORDS):
        pv = vertex(h, bp.provenance, ctx)
        vx, vy = pv.x - q.x, pv.y - q.y
        return (bp.point.x - q.x) * vx + (bp.point.y - q.y) * vy > vx * vx + vy * vy


def next_vis_reflex(h: PolygonHandle, c: Chain, p: BoundaryPoint,
                    ctx: QueryContext) -> NextReflexResult:
    """
    Find the next visible reflex vertex after a visible point p of chain c.

    Args:
        h: Polygon handle
        c: Independent chain
        p: Visible point of c
        ctx: Query context

    Returns:
        FoundReflex with the vertex and its shadow, or EndOfChain
    """
    q = h.q
    with ws_scope(ctx, NEXT_VIS_REFLEX_WORDS):
        if isinstance(p, VertexPoint) and p != c.end:
            if classify_reflex(h, p.index, ctx) is ReflexClass.REFLEX_R:
                p = ray_shoot(h, c, p, ctx)
                if p == c.end:
                    return EndOfChain(c.end)

        if isinstance(p, EdgePoint) and p.provenance is not None and is_shadow_point(h, p, ctx):
            u = VertexPoint(p.provenance)
            if on_chain(h, c, u) and rel(h, c, u) > rel(h, c, p):
                kind = classify_reflex(h, u.index, ctx)
                if kind is ReflexClass.REFLEX_L:
                    return FoundReflex(u.index, p, kind)

        first = None
        for idx, _, _, kind in interior_vertices(h, c, ctx, p):
            if kind.is_reflex:
                first = (idx, kind)
                break
        if first is None:
            return EndOfChain(c.end)

        v, v_kind = first
        if is_visible(h, c, VertexPoint(v), ctx):
            return FoundReflex(v, ray_shoot(h, c, VertexPoint(v), ctx), v_kind)

        # v is hidden: the answer is the L-type vertex inside the region cut off
        # by segment q-v with the smallest angle from p
        with ws_scope(ctx, SCAN_WORDS):
            pv = vertex(h, v, ctx)
            ref = PseudoAngle.towards(q, point_of(h, p, ctx))
            inside = False
            best_idx = None
            best_pt = None
            prev = None
            cur = None
            for bp, pt, _ in walk(h, c, ctx, VertexPoint(v)):
                # inside holds for cur until the piece cur->pt is examined
                if (prev is not None and inside and isinstance(cur[0], VertexPoint)
                        and classify_at(q, prev[1], cur[1], pt) is ReflexClass.REFLEX_L):
                    if best_pt is None or cmp_ccw_angle(q, ref, cur[1], best_pt) == Ordering.LT:
                        best_idx, best_pt = cur[0].index, cur[1]
                if cur is not None and segments_cross_properly(q, pv, cur[1], pt):
                    inside = not inside
                prev, cur = cur, (bp, pt)
        if best_idx is None:
            raise InternalError(f"no visible reflex vertex found behind hidden vertex {v}")
        return FoundReflex(best_idx, ray_shoot(h, c, VertexPoint(best_idx), ctx),
                           ReflexClass.REFLEX_L)
