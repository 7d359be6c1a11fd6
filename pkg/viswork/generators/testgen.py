"""
Seeded polygon families with controlled reflex structure.

Every generator is a pure function of its arguments: the same parameters give
the same exact coordinates on every platform. Instances that break weak
general position are regenerated with a perturbed seed.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..algorithms.rng import SplitMix64
from ..core.errors import (
    DegenerateInput,
    InternalError,
    InvalidQuery,
    NotSimple,
    OffsetOutside,
    ViewpointOutside,
)
from ..core.geometry import Point
from ..core.polygon_store import load
from ..utils.logger import get_logger

logger = get_logger(__name__)

Polygon = Tuple[List[Point], Point]

MAX_ATTEMPTS = 64
SEED_STRIDE = 0x9E3779B97F4A7C15
CIRCLE_B = 64
CIRCLE_A_RANGE = 240
STAR_GRID = 256
PI = Fraction(355, 113)
TAN_TERMS = 10

SQ4: Polygon = (
    [Point(0, 0), Point(4, 0), Point(4, 4), Point(0, 4)],
    Point(2, 2),
)


class Family(Enum):
    CONVEX = "convex"
    COMB = "comb"
    DISPLACED_STAR = "star"
    DEGENERATE = "degenerate"


class DegenerateKind(Enum):
    COLLINEAR_PAIR = "collinear-pair"
    VERTEX_ON_P0_RAY = "vertex-on-p0-ray"
    Q_ON_BOUNDARY = "q-on-boundary"


@dataclass
class GenSpec:
    """One generated instance: family, size parameter, seed and shape parameters."""

    family: Family
    size: int = 4
    seed: Optional[int] = 0
    params: Dict[str, Any] = field(default_factory=dict)

    def label(self) -> str:
        return f"{self.family.value}-{self.size}-{self.seed}"


def _attempts(seed: int) -> List[SplitMix64]:
    return [SplitMix64((seed + k * SEED_STRIDE) & ((1 << 64) - 1)) for k in range(MAX_ATTEMPTS)]


def _first_valid(seed: int, build: Callable[[SplitMix64], Polygon], what: str) -> Polygon:
    for attempt, rng in enumerate(_attempts(seed)):
        vertices, q = build(rng)
        try:
            load(vertices, q, strict=True, reverse_cw=False)
        except (DegenerateInput, NotSimple, ViewpointOutside) as e:
            logger.debug("%s attempt %d rejected: %s", what, attempt, e)
            continue
        return vertices, q
    raise InternalError(f"{what}: no valid instance after {MAX_ATTEMPTS} attempts")


def gen_convex(n: int, seed: Optional[int] = None) -> Polygon:
    """
    Convex polygon with vertices on a rational parametrization of the unit circle.

    With ``seed=None`` and n=4 the canonical square SQ4 is returned.

    Args:
        n: Number of vertices, 3 <= n <= 481
        seed: Generator seed

    Returns:
        (vertices, q) with q the centroid snapped to a 1/256 grid
    """
    if n < 3:
        raise InvalidQuery(f"a convex polygon needs at least 3 vertices, got {n}")
    if n > 2 * CIRCLE_A_RANGE + 1:
        raise InvalidQuery(f"convex generator supports at most {2 * CIRCLE_A_RANGE + 1} vertices")
    if seed is None:
        if n == 4:
            return list(SQ4[0]), SQ4[1]
        seed = 0

    b2 = CIRCLE_B * CIRCLE_B

    def build(rng: SplitMix64) -> Polygon:
        chosen = set()
        while len(chosen) < n:
            chosen.add(rng.randint(-CIRCLE_A_RANGE, CIRCLE_A_RANGE))
        vertices = []
        for a in sorted(chosen):
            d = a * a + b2
            vertices.append(Point(Fraction(b2 - a * a, d), Fraction(2 * a * CIRCLE_B, d)))
        cx = sum(v.x for v in vertices) / n
        cy = sum(v.y for v in vertices) / n
        q = Point(Fraction(round(cx * STAR_GRID), STAR_GRID), Fraction(round(cy * STAR_GRID), STAR_GRID))
        return vertices, q

    return _first_valid(seed, build, f"convex n={n}")


def gen_comb(m: int, seed: int = 0) -> Polygon:
    """
    Rectangle with ``m`` jittered rectangular teeth on its top edge.

    The viewpoint sits near the middle of the bottom edge, so every tooth
    hides part of itself: teeth to the right of q have an L-type left base
    corner, teeth to the left an R-type right base corner, and a tooth directly
    above q neither. n = 4m + 4.
    """
    if m < 1:
        raise InvalidQuery(f"a comb needs at least one tooth, got {m}")
    width = 4 * m
    height = 8

    def build(rng: SplitMix64) -> Polygon:
        teeth = []
        for j in range(m):
            xl = 4 * j + 1 + Fraction(rng.randint(-16, 16), 64)
            xr = 4 * j + 3 + Fraction(rng.randint(-16, 16), 64)
            top = height + 8 + Fraction(rng.randint(-32, 32), 64)
            teeth.append((xl, xr, top))
        vertices = [Point(0, 0), Point(width, 0), Point(width, height)]
        for xl, xr, top in reversed(teeth):
            vertices.extend([Point(xr, height), Point(xr, top), Point(xl, top), Point(xl, height)])
        vertices.append(Point(0, height))
        q = Point(2 * m + Fraction(2 * rng.randint(0, 15) + 1, 128), 1 + Fraction(rng.randint(1, 63), 256))
        return vertices, q

    return _first_valid(seed, build, f"comb m={m}")


def _tan(x: Fraction) -> Fraction:
    # Taylor sums for |x| <= pi/4; the error is far below the snapping grid
    x2 = x * x
    sin_term, cos_term = x, Fraction(1)
    sin_sum, cos_sum = x, Fraction(1)
    for k in range(1, TAN_TERMS):
        sin_term = -sin_term * x2 / ((2 * k) * (2 * k + 1))
        cos_term = -cos_term * x2 / ((2 * k - 1) * (2 * k))
        sin_sum += sin_term
        cos_sum += cos_term
    return sin_sum / cos_sum


def _circle_point(turn: Fraction, grid: int) -> Tuple[Fraction, Fraction]:
    """
    Rational point on the unit circle near ``turn`` full turns CCW from +x.

    The half-angle tangent is snapped to ``grid`` and mapped through
    ((g^2 - a^2), 2ag) / (g^2 + a^2), the parametrization gen_convex uses.
    """
    turn %= 1
    if turn < Fraction(1, 4):
        w, sign = turn, 1
    elif turn < Fraction(3, 4):
        w, sign = turn - Fraction(1, 2), -1
    else:
        w, sign = turn - 1, 1
    a = round(_tan(PI * w) * grid)
    d = a * a + grid * grid
    return Fraction(sign * (grid * grid - a * a), d), Fraction(sign * 2 * a * grid, d)


def gen_displaced_star(n: int, outer: Fraction = Fraction(4), inner: Fraction = Fraction(2),
                       offset: Tuple[Fraction, Fraction] = (Fraction(0), Fraction(0)),
                       seed: int = 0) -> Polygon:
    """
    Star with alternating radii around the origin, viewed from ``offset``.

    Directions come from the rational circle parametrization with the
    half-angle tangent snapped to a grid, so coordinates are exact and
    identical on every platform.

    Args:
        n: Number of vertices, even and at least 6
        outer: Outer radius R
        inner: Inner radius r, 0 < r < R
        offset: Viewpoint position relative to the centre
        seed: Seed for the rotation

    Raises:
        OffsetOutside: If the viewpoint falls outside the star
    """
    outer, inner = Fraction(outer), Fraction(inner)
    if n < 6 or n % 2:
        raise InvalidQuery(f"a star needs an even vertex count of at least 6, got {n}")
    if not 0 < inner < outer:
        raise InvalidQuery("star radii must satisfy 0 < inner < outer")
    q = Point(Fraction(offset[0]), Fraction(offset[1]))
    grid = max(STAR_GRID, 4 * n)

    def build(rng: SplitMix64) -> Polygon:
        rotation = Fraction(rng.fraction_bits(16), 65536)
        vertices = []
        for i in range(n):
            ux, uy = _circle_point((i + Fraction(1, 2) + rotation) / n, grid)
            radius = outer if i % 2 == 0 else inner
            vertices.append(Point(ux * radius, uy * radius))
        return vertices, q

    for attempt, rng in enumerate(_attempts(seed)):
        vertices, _ = build(rng)
        try:
            load(vertices, q, strict=True, reverse_cw=False)
        except ViewpointOutside as e:
            raise OffsetOutside(f"offset {offset} puts the viewpoint outside the star: {e}")
        except (DegenerateInput, NotSimple) as e:
            logger.debug("star attempt %d rejected: %s", attempt, e)
            continue
        return vertices, q
    raise InternalError(f"star n={n}: no valid instance after {MAX_ATTEMPTS} attempts")


def gen_degenerate(kind: DegenerateKind, seed: Optional[int] = None) -> Polygon:
    """
    An instance that violates exactly one input assumption.

    A nonzero seed translates the whole instance by an integer vector.
    """
    if kind is DegenerateKind.COLLINEAR_PAIR:
        vertices = [Point(0, 0), Point(4, 0), Point(4, 4), Point(0, 4), Point(1, 1)]
        q = Point(2, 2)
    elif kind is DegenerateKind.VERTEX_ON_P0_RAY:
        vertices = [Point(0, 0), Point(4, 0), Point(4, 2), Point(4, 4), Point(0, 4)]
        q = Point(2, 2)
    else:
        vertices = list(SQ4[0])
        q = Point(4, 2)
    if seed:
        rng = SplitMix64(seed)
        tx, ty = rng.randint(-8, 8), rng.randint(-8, 8)
        vertices = [Point(v.x + tx, v.y + ty) for v in vertices]
        q = Point(q.x + tx, q.y + ty)
    return vertices, q


def generate(spec: GenSpec) -> Polygon:
    """Dispatch a GenSpec to its family generator."""
    params = spec.params
    if spec.family is Family.CONVEX:
        return gen_convex(spec.size, spec.seed)
    if spec.family is Family.COMB:
        return gen_comb(spec.size, spec.seed or 0)
    if spec.family is Family.DISPLACED_STAR:
        offset = params.get('offset', (0, 0))
        return gen_displaced_star(
            spec.size,
            Fraction(str(params.get('outer', 4))),
            Fraction(str(params.get('inner', 2))),
            (Fraction(str(offset[0])), Fraction(str(offset[1]))),
            spec.seed or 0,
        )
    kind = params.get('kind', DegenerateKind.COLLINEAR_PAIR)
    return gen_degenerate(DegenerateKind(kind), spec.seed)
