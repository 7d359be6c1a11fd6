"""Constant-workspace, output-sensitive visibility polygon of an independent chain."""

from fractions import Fraction
from typing import Optional

from ..core.errors import ChainNotIndependent
from ..core.events import EventSink, P0Event, ShadowEvent, VertexEvent, VisEvent
from ..core.polygon_store import (
    BoundaryPoint,
    Chain,
    PolygonHandle,
    QueryContext,
    VertexPoint,
    boundary_points,
    end_rel,
    rel,
    ws_scope,
)
from .visibility_core import (
    EndOfChain,
    ReflexClass,
    classify_reflex,
    find_p0,
    is_shadow_point,
    is_visible,
    next_vis_reflex,
    ray_shoot,
)

VIS_CHAIN_WORDS = 6
EMIT_WORDS = 3


def endpoint_event(h: PolygonHandle, bp: BoundaryPoint, ctx: QueryContext) -> Optional[VisEvent]:
    """
    Event for a chain endpoint, or None when the point is not part of the output.

    A constructed point is an event only when it is a shadow; a point in front
    of a hidden vertex is a plain boundary point.
    """
    if isinstance(bp, VertexPoint):
        return VertexEvent(bp.index)
    if bp.provenance is None:
        return P0Event(bp.point)
    if is_shadow_point(h, bp, ctx):
        return ShadowEvent(bp.provenance, bp.edge, bp.point)
    return None


def _emit_vertices(h: PolygonHandle, c: Chain, frm: BoundaryPoint, hi: Fraction,
                   inclusive: bool, ctx: QueryContext, sink: EventSink) -> None:
    # Vertices strictly after frm up to offset hi; indices only, no reads
    with ws_scope(ctx, EMIT_WORDS):
        first = True
        for bp, bp_rel in boundary_points(h, c, frm):
            if first:
                first = False
                continue
            if bp_rel > hi or (bp_rel == hi and not inclusive) or bp == c.end:
                return
            sink(VertexEvent(bp.index))


def check_independent(h: PolygonHandle, c: Chain, ctx: QueryContext) -> None:
    """
    Raises:
        ChainNotIndependent: If an endpoint of c is not visible
    """
    for name, bp in (("start", c.start), ("end", c.end)):
        if not is_visible(h, c, bp, ctx):
            raise ChainNotIndependent(f"chain {name} {bp} is not visible from the viewpoint")


def vis_chain(h: PolygonHandle, c: Chain, ctx: QueryContext, sink: EventSink,
              *, report_end: bool = False) -> None:
    """
    Report the visible vertices and shadows of an independent chain in CCW order.

    The start point is assumed reported by the caller; the end is reported
    only when ``report_end`` is set and it is an output event.

    Args:
        h: Polygon handle
        c: Independent chain
        ctx: Query context
        sink: Event consumer
        report_end: Also report the chain end

    Raises:
        ChainNotIndependent: In debug mode, if an endpoint is hidden
    """
    if ctx.debug:
        check_independent(h, c, ctx)

    with ws_scope(ctx, VIS_CHAIN_WORDS):
        last = end_rel(h, c)

        def report_chain_end() -> None:
            if report_end:
                event = endpoint_event(h, c.end, ctx)
                if event is not None:
                    sink(event)

        def finish(frm: BoundaryPoint) -> None:
            _emit_vertices(h, c, frm, last, False, ctx, sink)
            report_chain_end()

        c_start = c.start
        c_start_rel = Fraction(0)
        if (isinstance(c_start, VertexPoint) and c_start != c.end
                and classify_reflex(h, c_start.index, ctx) is ReflexClass.REFLEX_R):
            sh = ray_shoot(h, c, c_start, ctx)
            if sh == c.end:
                report_chain_end()
                return
            sink(ShadowEvent(c_start.index, sh.edge, sh.point))
            c_start, c_start_rel = sh, rel(h, c, sh)

        while c_start_rel < last:
            found = next_vis_reflex(h, c, c_start, ctx)
            if isinstance(found, EndOfChain):
                finish(c_start)
                return

            v = VertexPoint(found.vertex)
            sh = found.shadow
            if found.kind is ReflexClass.REFLEX_R:
                v_rel = rel(h, c, v)
                _emit_vertices(h, c, c_start, v_rel, True, ctx, sink)
                if sh == c.end:
                    report_chain_end()
                    return
                sink(ShadowEvent(found.vertex, sh.edge, sh.point))
                c_start, c_start_rel = sh, rel(h, c, sh)
            else:
                if sh != c_start:
                    _emit_vertices(h, c, c_start, rel(h, c, sh), False, ctx, sink)
                    sink(ShadowEvent(found.vertex, sh.edge, sh.point))
                if v == c.end:
                    if report_end:
                        sink(VertexEvent(found.vertex))
                    return
                sink(VertexEvent(found.vertex))
                c_start, c_start_rel = v, rel(h, c, v)


def vis_polygon(h: PolygonHandle, ctx: QueryContext, sink: EventSink) -> None:
    """Report the whole visibility polygon: P0, then the closed chain from p0."""
    p0 = find_p0(h, ctx)
    sink(P0Event(p0.point))
    vis_chain(h, Chain(p0, p0, wraps=True), ctx, sink)
