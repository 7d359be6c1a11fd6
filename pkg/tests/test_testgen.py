from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from viswork.core.errors import DegenerateInput, InvalidQuery, OffsetOutside, ViewpointOutside
from viswork.core.polygon_store import load
from viswork.core.runner import reflex_count
from viswork.generators.testgen import (
    SQ4,
    DegenerateKind,
    Family,
    GenSpec,
    gen_comb,
    gen_convex,
    gen_degenerate,
    gen_displaced_star,
    generate,
)


def test_canonical_square():
    assert gen_convex(4) == (list(SQ4[0]), SQ4[1])


@pytest.mark.parametrize("n", [3, 7, 32, 100])
def test_convex_is_valid(n):
    vertices, q = gen_convex(n, seed=3)
    h = load(vertices, q, strict=True, reverse_cw=False)
    assert h.n == n
    assert reflex_count(h) == 0


def test_convex_bounds():
    with pytest.raises(InvalidQuery):
        gen_convex(2)
    with pytest.raises(InvalidQuery):
        gen_convex(500)


@pytest.mark.parametrize("m", [1, 4, 20])
def test_comb_shape(m):
    vertices, q = gen_comb(m, seed=5)
    assert len(vertices) == 4 * m + 4
    h = load(vertices, q, strict=True, reverse_cw=False)
    # a tooth straddling the viewpoint hides nothing
    assert reflex_count(h) == (m if m % 2 == 0 else m - 1)


def test_comb_needs_a_tooth():
    with pytest.raises(InvalidQuery):
        gen_comb(0)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2 ** 32))
def test_generators_are_pure(m, seed):
    assert gen_comb(m, seed) == gen_comb(m, seed)


def test_star():
    vertices, q = gen_displaced_star(12, offset=("21/20", "1/3"), seed=4)
    h = load(vertices, q, strict=True, reverse_cw=False)
    assert h.n == 12
    assert gen_displaced_star(12, offset=("21/20", "1/3"), seed=4) == (vertices, q)


@pytest.mark.parametrize("n", [6, 8, 64, 256])
def test_star_vertices_lie_exactly_on_their_circles(n):
    vertices, _ = gen_displaced_star(n, outer=4, inner="3/2", seed=n)
    for i, v in enumerate(vertices):
        radius = Fraction(4) if i % 2 == 0 else Fraction(3, 2)
        assert v.x * v.x + v.y * v.y == radius * radius


def test_star_offset_outside():
    with pytest.raises(OffsetOutside):
        gen_displaced_star(8, offset=(10, 10))


def test_star_bad_parameters():
    with pytest.raises(InvalidQuery):
        gen_displaced_star(7)
    with pytest.raises(InvalidQuery):
        gen_displaced_star(8, outer=2, inner=3)


@pytest.mark.parametrize("kind,error", [
    (DegenerateKind.COLLINEAR_PAIR, DegenerateInput),
    (DegenerateKind.VERTEX_ON_P0_RAY, DegenerateInput),
    (DegenerateKind.Q_ON_BOUNDARY, ViewpointOutside),
])
@pytest.mark.parametrize("seed", [None, 3])
def test_degenerate_instances_are_rejected(kind, error, seed):
    with pytest.raises(error):
        load(*gen_degenerate(kind, seed))


def test_generate_dispatch():
    assert generate(GenSpec(Family.CONVEX, 4, None)) == gen_convex(4)
    assert generate(GenSpec(Family.COMB, 3, 2)) == gen_comb(3, 2)
    spec = GenSpec(Family.DISPLACED_STAR, 10, 1, {"offset": ["21/20", "1/3"]})
    assert generate(spec) == gen_displaced_star(10, offset=("21/20", "1/3"), seed=1)
    assert spec.label() == "star-10-1"
