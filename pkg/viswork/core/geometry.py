"""Exact geometric predicates and constructions over rational coordinates."""

from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Optional, Tuple, Union

from .errors import InvalidQuery, OverlapDegenerate

Scalar = Union[int, Fraction, str]


def to_scalar(value: Scalar) -> Fraction:
    """Convert an int, Fraction or string ('3', '1/2', '0.25') to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a string instead")
    return Fraction(value)


@dataclass(frozen=True)
class Point:
    """A point with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'x', to_scalar(self.x))
        object.__setattr__(self, 'y', to_scalar(self.y))

    def __sub__(self, other: 'Point') -> 'Point':
        return Point(self.x - other.x, self.y - other.y)

    def bits(self) -> int:
        """Widest numerator or denominator among the two coordinates, in bits."""
        return max(
            abs(self.x.numerator).bit_length(), self.x.denominator.bit_length(),
            abs(self.y.numerator).bit_length(), self.y.denominator.bit_length(),
        )


class Orientation(IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


class HitKind(Enum):
    PROPER_CROSSING = "proper_crossing"
    ENDPOINT_TOUCH = "endpoint_touch"


@dataclass(frozen=True)
class PseudoAngle:
    """A direction around an origin, compared by CCW offset without trigonometry."""

    origin: Point
    dx: Fraction
    dy: Fraction

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise InvalidQuery("a pseudo-angle needs a nonzero direction")

    @classmethod
    def towards(cls, origin: Point, target: Point) -> 'PseudoAngle':
        """Direction from origin to target."""
        return cls(origin, target.x - origin.x, target.y - origin.y)

    @classmethod
    def positive_x(cls, origin: Point) -> 'PseudoAngle':
        return cls(origin, Fraction(1), Fraction(0))


@dataclass(frozen=True)
class RayHit:
    """Contact of a ray q->through with a segment [a, b].

    ``t`` is measured in units of |q->through| and ``u`` is the parameter along
    the segment (0 at a, 1 at b).
    """

    t: Fraction
    point: Point
    kind: HitKind
    u: Fraction


def cross(ax: Fraction, ay: Fraction, bx: Fraction, by: Fraction) -> Fraction:
    return ax * by - ay * bx


# Sign tests run on (x numerator, x denominator, y numerator, y denominator)
# vectors with positive denominators, so no intermediate Fraction is built.
_Vec = Tuple[int, int, int, int]


def _vec(p: Point, o: Point) -> _Vec:
    """p - o as an integer vector."""
    px, py, ox, oy = p.x, p.y, o.x, o.y
    return (
        px.numerator * ox.denominator - ox.numerator * px.denominator, px.denominator * ox.denominator,
        py.numerator * oy.denominator - oy.numerator * py.denominator, py.denominator * oy.denominator,
    )


def _direction(ref: 'PseudoAngle') -> _Vec:
    return ref.dx.numerator, ref.dx.denominator, ref.dy.numerator, ref.dy.denominator


def _cross_sign(v: _Vec, w: _Vec) -> int:
    lhs = v[0] * w[2] * v[3] * w[1]
    rhs = v[2] * w[0] * v[1] * w[3]
    return (lhs > rhs) - (lhs < rhs)


def _dot_sign(v: _Vec, w: _Vec) -> int:
    total = v[0] * w[0] * v[3] * w[3] + v[2] * w[2] * v[1] * w[1]
    return (total > 0) - (total < 0)


def _is_zero(v: _Vec) -> bool:
    return v[0] == 0 and v[2] == 0


def orient(a: Point, b: Point, c: Point) -> Orientation:
    """
    Orientation of the triple (a, b, c).

    Args:
        a: First point
        b: Second point
        c: Third point

    Returns:
        CCW for a left turn, CW for a right turn, COLLINEAR otherwise
    """
    return Orientation(_cross_sign(_vec(b, a), _vec(c, a)))


def same_direction(q: Point, a: Point, b: Point) -> bool:
    """True when q->a and q->b point the same way (positive multiples)."""
    va, vb = _vec(a, q), _vec(b, q)
    return _cross_sign(va, vb) == 0 and _dot_sign(va, vb) > 0


def _half(ref: _Vec, d: _Vec) -> int:
    # 0 for offsets in [0, pi), 1 for [pi, 2pi)
    c = _cross_sign(ref, d)
    if c > 0 or (c == 0 and _dot_sign(ref, d) > 0):
        return 0
    return 1


def cmp_ccw_angle(q: Point, ref: PseudoAngle, p1: Point, p2: Point) -> Ordering:
    """
    Compare the CCW offsets of q->p1 and q->p2 measured from ``ref``.

    Args:
        q: Viewpoint (apex)
        ref: Reference direction with origin q
        p1: First point
        p2: Second point

    Returns:
        LT, EQ or GT as the offset of p1 is smaller, equal or larger

    Raises:
        InvalidQuery: If p1 or p2 coincides with q
    """
    d1, d2 = _vec(p1, q), _vec(p2, q)
    if _is_zero(d1) or _is_zero(d2):
        raise InvalidQuery("cannot take the angle of the viewpoint itself")
    r = _direction(ref)
    h1 = _half(r, d1)
    h2 = _half(r, d2)
    if h1 != h2:
        return Ordering.LT if h1 < h2 else Ordering.GT
    c = _cross_sign(d1, d2)
    if c > 0:
        return Ordering.LT
    if c < 0:
        return Ordering.GT
    return Ordering.EQ


def ray_segment_intersection(q: Point, through: Point, seg_a: Point, seg_b: Point) -> Optional[RayHit]:
    """
    Intersect the open ray from q through ``through`` with segment [seg_a, seg_b].

    Args:
        q: Ray origin
        through: Second point fixing the ray direction
        seg_a: Segment start
        seg_b: Segment end

    Returns:
        RayHit for the first contact at t > 0, or None if the ray misses

    Raises:
        InvalidQuery: If through equals q
        OverlapDegenerate: If the ray runs along the segment
    """
    d = _vec(through, q)
    if _is_zero(d):
        raise InvalidQuery("ray direction is zero")
    wa, wb = _vec(seg_a, q), _vec(seg_b, q)
    if _cross_sign(d, wa) * _cross_sign(d, wb) > 0:
        return None
    if _dot_sign(d, wa) <= 0 and _dot_sign(d, wb) <= 0:
        return None

    dx, dy = through.x - q.x, through.y - q.y
    ex, ey = seg_b.x - seg_a.x, seg_b.y - seg_a.y
    wx, wy = seg_a.x - q.x, seg_a.y - q.y
    denom = cross(dx, dy, ex, ey)

    if denom == 0:
        if cross(wx, wy, dx, dy) != 0:
            return None
        # Collinear: the segment overlaps the ray iff one endpoint lies ahead of q
        dd = dx * dx + dy * dy
        ta = (wx * dx + wy * dy) / dd
        tb = ((seg_b.x - q.x) * dx + (seg_b.y - q.y) * dy) / dd
        if ta > 0 or tb > 0:
            raise OverlapDegenerate(
                f"ray from {format_point(q)} through {format_point(through)} runs along "
                f"segment {format_point(seg_a)}-{format_point(seg_b)}"
            )
        return None

    t = cross(wx, wy, ex, ey) / denom
    u = cross(wx, wy, dx, dy) / denom
    if t <= 0 or u < 0 or u > 1:
        return None
    if u == 0:
        point = seg_a
    elif u == 1:
        point = seg_b
    else:
        point = Point(seg_a.x + u * ex, seg_a.y + u * ey)
    kind = HitKind.ENDPOINT_TOUCH if u in (0, 1) else HitKind.PROPER_CROSSING
    return RayHit(t, point, kind, u)


def in_cone(q: Point, a: Point, b: Point, p: Point) -> bool:
    """
    Test whether p lies in the closed cone swept CCW from q->a to q->b.

    When q->a and q->b coincide the cone is the full plane.

    Raises:
        InvalidQuery: If any of a, b, p equals q
    """
    if p == q or a == q or b == q:
        raise InvalidQuery("cone test needs points distinct from the apex")
    if same_direction(q, a, b):
        return True
    return cmp_ccw_angle(q, PseudoAngle.towards(q, a), p, b) != Ordering.GT


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when the open segments ab and cd cross at a single interior point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True when p lies on the closed segment ab."""
    if orient(a, b, p) != Orientation.COLLINEAR:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when the closed segments ab and cd share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def format_scalar(value: Fraction) -> str:
    """Exact text form: '3' or '1/2'."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_point(p: Point) -> str:
    return f"({format_scalar(p.x)}, {format_scalar(p.y)})"
