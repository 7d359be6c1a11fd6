from fractions import Fraction

import pytest

from viswork.algorithms.visibility_core import (
    EndOfChain,
    FoundReflex,
    ReflexClass,
    classify_at,
    classify_reflex,
    find_p0,
    is_shadow_point,
    is_visible,
    next_vis_reflex,
    ray_shoot,
    shadow,
)
from viswork.core.errors import DegenerateInput, InvalidQuery
from viswork.core.events import ShadowEvent, VertexEvent
from viswork.core.geometry import Point
from viswork.core.polygon_store import Chain, EdgePoint, QueryContext, VertexPoint, load, point_of
from viswork.generators.testgen import gen_comb, gen_displaced_star
from viswork.reference.oracle import oracle_vis

SHADOW_OF_3 = EdgePoint(4, Point(Fraction(2, 3), 4), 3, Fraction(2, 3))


def closed_chain(h):
    p0 = find_p0(h, QueryContext())
    return Chain(p0, p0, wraps=True)


def test_classify_reflex_l6(l6):
    ctx = QueryContext()
    kinds = [classify_reflex(l6, i, ctx) for i in range(6)]
    assert kinds == [ReflexClass.NOT_REFLEX] * 3 + [ReflexClass.REFLEX_R] + [ReflexClass.NOT_REFLEX] * 2
    assert ctx.access_count == 18


def test_classify_left_type():
    # Reflex corner at the origin, both neighbours to the left of q->v
    q = Point(-1, -2)
    assert classify_at(q, Point(0, 2), Point(0, 0), Point(-2, 0)) is ReflexClass.REFLEX_L


def test_classify_convex_corner():
    q = Point(1, 1)
    assert classify_at(q, Point(0, 2), Point(0, 0), Point(2, 0)) is ReflexClass.NOT_REFLEX


def test_classify_edge_through_viewpoint():
    with pytest.raises(DegenerateInput):
        classify_at(Point(1, 1), Point(0, 0), Point(2, 2), Point(4, 0))


def test_find_p0(l6, sq4):
    p0 = find_p0(l6, QueryContext())
    assert p0.edge == 1
    assert p0.point == Point(4, Fraction(1, 2))
    assert p0.param == Fraction(1, 4)
    assert p0.provenance is None
    assert find_p0(sq4, QueryContext()).point == Point(4, 2)


def test_is_visible(l6):
    c = closed_chain(l6)
    ctx = QueryContext()
    assert is_visible(l6, c, VertexPoint(2), ctx)
    assert is_visible(l6, c, VertexPoint(3), ctx)
    assert not is_visible(l6, c, VertexPoint(4), ctx)
    assert is_visible(l6, c, VertexPoint(5), ctx)


def test_ray_shoot_from_reflex_vertex(l6):
    c = closed_chain(l6)
    ctx = QueryContext()
    sh = ray_shoot(l6, c, VertexPoint(3), ctx)
    assert sh == SHADOW_OF_3
    assert sh.provenance == 3
    assert sh.param == Fraction(2, 3)
    assert shadow(l6, c, 3, QueryContext()) == sh
    assert ctx.max_coordinate_bits >= 2


def test_ray_shoot_convex_vertex_returns_itself(l6):
    c = closed_chain(l6)
    assert ray_shoot(l6, c, VertexPoint(2), QueryContext()) == VertexPoint(2)


def test_ray_shoot_edge_point_returns_itself(l6):
    c = closed_chain(l6)
    assert ray_shoot(l6, c, SHADOW_OF_3, QueryContext()) == SHADOW_OF_3


def test_ray_shoot_off_chain(l6):
    c = Chain(VertexPoint(5), VertexPoint(2))
    with pytest.raises(InvalidQuery):
        ray_shoot(l6, c, VertexPoint(3), QueryContext())


def test_is_shadow_point(l6):
    c = closed_chain(l6)
    ctx = QueryContext()
    assert is_shadow_point(l6, ray_shoot(l6, c, VertexPoint(3), ctx), ctx)
    assert not is_shadow_point(l6, c.start, ctx)
    assert not is_shadow_point(l6, VertexPoint(3), ctx)


def test_next_vis_reflex_from_p0(l6):
    c = closed_chain(l6)
    found = next_vis_reflex(l6, c, c.start, QueryContext())
    assert isinstance(found, FoundReflex)
    assert found.vertex == 3
    assert found.kind is ReflexClass.REFLEX_R
    assert found.shadow == SHADOW_OF_3


def test_next_vis_reflex_after_the_last_one(l6):
    c = closed_chain(l6)
    found = next_vis_reflex(l6, c, SHADOW_OF_3, QueryContext())
    assert found == EndOfChain(c.end)


def test_next_vis_reflex_on_convex(sq4):
    c = closed_chain(sq4)
    assert isinstance(next_vis_reflex(sq4, c, c.start, QueryContext()), EndOfChain)


def test_workspace_is_bounded(l6):
    c = closed_chain(l6)
    ctx = QueryContext()
    next_vis_reflex(l6, c, c.start, ctx)
    assert ctx.ws_current == 0
    assert 0 < ctx.ws_peak <= 30


def _first_visible_reflex_after(h, events, position):
    verts = h.vertices
    for event in events[position + 1:]:
        if isinstance(event, VertexEvent):
            i = event.index
            if classify_at(h.q, verts[i - 1], verts[i], verts[(i + 1) % h.n]) is not ReflexClass.NOT_REFLEX:
                return i
    return None


def _small_polygon(family, size, seed):
    if family == "comb":
        return gen_comb(size, seed)
    return gen_displaced_star(size, offset=("21/20", "1/3"), seed=seed)


@pytest.mark.parametrize("family, size, seed", [
    ("comb", 2, 0), ("comb", 4, 3), ("comb", 6, 1), ("comb", 6, 9),
    ("star", 8, 0), ("star", 16, 5), ("star", 30, 2),
])
def test_next_vis_reflex_matches_exhaustive_search(family, size, seed):
    h = load(*_small_polygon(family, size, seed))
    assert h.n <= 30
    c = closed_chain(h)
    events = oracle_vis(h)
    verts = h.vertices

    starts = [(0, c.start)]
    for pos, event in enumerate(events):
        if isinstance(event, VertexEvent):
            i = event.index
            if classify_at(h.q, verts[i - 1], verts[i], verts[(i + 1) % h.n]) is ReflexClass.NOT_REFLEX:
                starts.append((pos, VertexPoint(i)))

    for pos, p in starts:
        expected = _first_visible_reflex_after(h, events, pos)
        found = next_vis_reflex(h, c, p, QueryContext())
        if expected is None:
            assert isinstance(found, EndOfChain)
            continue
        assert isinstance(found, FoundReflex)
        assert found.vertex == expected
        shadows = [e for e in events if isinstance(e, ShadowEvent) and e.reflex == expected]
        if shadows:
            assert point_of(h, found.shadow, QueryContext()) == shadows[0].point
