"""
Read-only polygon store and the memory-model instrumentation.

Every algorithm reads vertices through :func:`vertex`, which counts accesses,
and declares its working variables through :func:`ws_scope`, which meters
workspace words. A :class:`Chain` is two boundary points plus a flag; its
interior is walked, never materialized.
"""

from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import (
    DegenerateInput,
    InvalidQuery,
    NotCCW,
    NotSimple,
    PolygonParseError,
    ViewpointOutside,
)
from .geometry import (
    Point,
    cross,
    format_point,
    format_scalar,
    on_segment,
    orient,
    segments_intersect,
)
from ..utils.logger import get_logger

logger = get_logger(__name__)

STRICT_LIMIT = 10_000


@dataclass
class QueryContext:
    """Per-query counters: vertex reads, workspace words and recursion depth."""

    access_count: int = 0
    ws_current: int = 0
    ws_peak: int = 0
    depth_current: int = 0
    depth_peak: int = 0
    debug: bool = False
    max_coordinate_bits: int = 0

    def acquire(self, words: int) -> None:
        if words < 0:
            raise InvalidQuery("workspace scopes cannot be negative")
        self.ws_current += words
        if self.ws_current > self.ws_peak:
            self.ws_peak = self.ws_current

    def release(self, words: int) -> None:
        self.ws_current -= words

    def set_depth(self, depth: int) -> None:
        """Move to recursion depth ``depth``, updating the peak."""
        self.depth_current = depth
        if depth > self.depth_peak:
            self.depth_peak = depth

    def note_point(self, p: Point) -> None:
        """Record the bit size of a constructed point."""
        bits = p.bits()
        if bits > self.max_coordinate_bits:
            self.max_coordinate_bits = bits


@contextmanager
def ws_scope(ctx: QueryContext, words: int) -> Iterator[QueryContext]:
    """Charge ``words`` workspace words for the duration of the block."""
    ctx.acquire(words)
    try:
        yield ctx
    finally:
        ctx.release(words)


@dataclass(frozen=True)
class PolygonHandle:
    """Immutable CCW vertex sequence plus the viewpoint q."""

    vertices: Tuple[Point, ...]
    q: Point
    reversed_input: bool = False

    @property
    def n(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class VertexPoint:
    """An input vertex, by index."""

    index: int


@dataclass(frozen=True)
class EdgePoint:
    """
    A point interior to edge ``edge`` (segment p_edge -> p_edge+1).

    ``provenance`` is the vertex whose ray from q constructed the point, or
    None for p0. ``param`` is the position along the edge in (0, 1).
    """

    edge: int
    point: Point
    provenance: Optional[int] = field(default=None, compare=False)
    param: Fraction = field(default=Fraction(0), compare=False)


BoundaryPoint = Union[VertexPoint, EdgePoint]


@dataclass(frozen=True)
class Chain:
    """CCW boundary chain from ``start`` to ``end``; ``wraps`` marks the closed chain."""

    start: BoundaryPoint
    end: BoundaryPoint
    wraps: bool = False


def vertex(h: PolygonHandle, i: int, ctx: QueryContext) -> Point:
    """
    Read vertex i, charging one input access.

    Raises:
        InvalidQuery: If i is out of range
    """
    if not 0 <= i < h.n:
        raise InvalidQuery(f"vertex index {i} out of range for n={h.n}")
    ctx.access_count += 1
    return h.vertices[i]


def point_of(h: PolygonHandle, bp: BoundaryPoint, ctx: QueryContext) -> Point:
    """Coordinates of a boundary point; vertices cost one access."""
    if isinstance(bp, VertexPoint):
        return vertex(h, bp.index, ctx)
    return bp.point


def boundary_coord(h: PolygonHandle, bp: BoundaryPoint) -> Fraction:
    """Position along the boundary: i for vertex i, e + param on edge e."""
    if isinstance(bp, VertexPoint):
        return Fraction(bp.index)
    return bp.edge + bp.param


def end_rel(h: PolygonHandle, c: Chain) -> Fraction:
    """Boundary length of the chain, in edges."""
    if c.start == c.end:
        return Fraction(h.n) if c.wraps else Fraction(0)
    return (boundary_coord(h, c.end) - boundary_coord(h, c.start)) % h.n


def rel(h: PolygonHandle, c: Chain, bp: BoundaryPoint) -> Fraction:
    """Offset of bp from the chain start; the end maps to :func:`end_rel`."""
    if bp == c.start:
        return Fraction(0)
    if bp == c.end:
        return end_rel(h, c)
    return (boundary_coord(h, bp) - boundary_coord(h, c.start)) % h.n


def on_chain(h: PolygonHandle, c: Chain, bp: BoundaryPoint) -> bool:
    if bp == c.start or bp == c.end:
        return True
    return 0 < rel(h, c, bp) < end_rel(h, c)


def advance(h: PolygonHandle, c: Chain, bp: BoundaryPoint, bp_rel: Fraction,
            last: Fraction) -> Optional[BoundaryPoint]:
    """Next boundary point after bp (at offset bp_rel) on a chain of length ``last``."""
    if bp_rel >= last:
        return None
    idx = (bp.index + 1) % h.n if isinstance(bp, VertexPoint) else (bp.edge + 1) % h.n
    idx_rel = (idx - boundary_coord(h, c.start)) % h.n
    if idx_rel <= bp_rel:
        idx_rel += h.n
    if idx_rel < last:
        return VertexPoint(idx)
    return c.end


def chain_next(h: PolygonHandle, c: Chain, bp: BoundaryPoint,
               ctx: QueryContext) -> Optional[BoundaryPoint]:
    """
    Next vertex of the chain after bp, the chain end if no vertex remains,
    or None if bp is the end.

    Raises:
        InvalidQuery: If bp is not on the chain
    """
    if not on_chain(h, c, bp):
        raise InvalidQuery(f"{bp} is not on the chain")
    last = end_rel(h, c)
    bp_rel = Fraction(0) if bp == c.start else rel(h, c, bp)
    return advance(h, c, bp, bp_rel, last)


def boundary_points(h: PolygonHandle, c: Chain,
                    frm: Optional[BoundaryPoint] = None) -> Iterator[Tuple[BoundaryPoint, Fraction]]:
    """Yield (point, offset) from ``frm`` (default the start) through the end, without reads."""
    last = end_rel(h, c)
    bp = c.start if frm is None else frm
    bp_rel = Fraction(0) if bp == c.start else rel(h, c, bp)
    yield bp, bp_rel
    if bp_rel >= last:
        return
    n = h.n
    idx = (bp.index + 1) % n if isinstance(bp, VertexPoint) else (bp.edge + 1) % n
    idx_rel = (idx - boundary_coord(h, c.start)) % n
    if idx_rel <= bp_rel:
        idx_rel += n
    # consecutive vertices are exactly one edge apart
    while idx_rel < last:
        yield VertexPoint(idx), idx_rel
        idx = (idx + 1) % n
        idx_rel += 1
    yield c.end, last


def walk(h: PolygonHandle, c: Chain, ctx: QueryContext,
         frm: Optional[BoundaryPoint] = None) -> Iterator[Tuple[BoundaryPoint, Point, Fraction]]:
    """Yield (point, coordinates, offset) from ``frm`` through the end; vertices cost one read."""
    for bp, bp_rel in boundary_points(h, c, frm):
        yield bp, point_of(h, bp, ctx), bp_rel


def pieces(h: PolygonHandle, c: Chain, ctx: QueryContext,
           frm: Optional[BoundaryPoint] = None
           ) -> Iterator[Tuple[BoundaryPoint, Point, BoundaryPoint, Point]]:
    """Yield consecutive (a, pa, b, pb) segments of the chain; each vertex is read once."""
    prev = None
    for bp, pt, _ in walk(h, c, ctx, frm):
        if prev is not None:
            yield prev[0], prev[1], bp, pt
        prev = (bp, pt)


def piece_edge(a: BoundaryPoint) -> int:
    """Edge index a piece starting at ``a`` lies on."""
    return a.index if isinstance(a, VertexPoint) else a.edge


def piece_param(bp: BoundaryPoint, at_end: bool) -> Fraction:
    """Parameter of a piece endpoint along its edge."""
    if isinstance(bp, EdgePoint):
        return bp.param
    return Fraction(1) if at_end else Fraction(0)


def signed_area2(vertices: Sequence[Point]) -> Fraction:
    """Twice the signed area (shoelace)."""
    total = Fraction(0)
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        total += cross(a.x, a.y, b.x, b.y)
    return total


def check_simple(vertices: Sequence[Point]) -> None:
    """
    O(n^2) pairwise edge test with bounding-box rejection.

    Raises:
        NotSimple: If two non-adjacent edges meet or adjacent edges fold back
    """
    n = len(vertices)
    boxes = []
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if a == b:
            raise NotSimple(f"vertices {i} and {(i + 1) % n} coincide")
        boxes.append((min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y)))

    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if boxes[i][1] < boxes[j][0] or boxes[j][1] < boxes[i][0]:
                continue
            if boxes[i][3] < boxes[j][2] or boxes[j][3] < boxes[i][2]:
                continue
            c, d = vertices[j], vertices[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges share one vertex; they must not overlap beyond it
                shared, far_1, far_2 = (b, a, d) if j == i + 1 else (a, b, c)
                if orient(far_1, shared, far_2) == 0 and (
                        on_segment(far_2, shared, far_1) or on_segment(far_1, shared, far_2)):
                    raise NotSimple(f"edges {i} and {j} overlap")
                continue
            if segments_intersect(a, b, c, d):
                raise NotSimple(f"edges {i} and {j} intersect")


def _contains_strictly(vertices: Sequence[Point], q: Point) -> bool:
    inside = False
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if (a.y > q.y) != (b.y > q.y):
            x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if x > q.x:
                inside = not inside
    return inside


def check_viewpoint(vertices: Sequence[Point], q: Point) -> None:
    """
    Raises:
        ViewpointOutside: If q is on the boundary or outside
        DegenerateInput: If two vertices share a ray from q, or a vertex is on the +x ray
    """
    n = len(vertices)
    for i in range(n):
        if on_segment(q, vertices[i], vertices[(i + 1) % n]):
            raise ViewpointOutside(f"viewpoint {format_point(q)} lies on edge {i}")
    if not _contains_strictly(vertices, q):
        raise ViewpointOutside(f"viewpoint {format_point(q)} is outside the polygon")

    seen: Dict[Tuple[int, Fraction], int] = {}
    for i, v in enumerate(vertices):
        dx, dy = v.x - q.x, v.y - q.y
        if dy == 0 and dx > 0:
            raise DegenerateInput(
                f"vertex {i} lies on the horizontal ray from the viewpoint; p0 would be a vertex"
            )
        key = ((1 if dx > 0 else -1), dy / dx) if dx != 0 else (0, Fraction(1 if dy > 0 else -1))
        if key in seen:
            raise DegenerateInput(
                f"vertices {seen[key]} and {i} are collinear with the viewpoint on the same ray"
            )
        seen[key] = i


def load(vertices: Sequence[Point], q: Point, strict: Optional[bool] = None,
         reverse_cw: bool = True) -> PolygonHandle:
    """
    Validate a polygon and wrap it in a read-only handle.

    Args:
        vertices: Boundary vertices in CCW (or CW, see reverse_cw) order
        q: Viewpoint
        strict: Run the O(n^2) simplicity test; defaults to n <= 10 000
        reverse_cw: Reverse clockwise input instead of failing

    Returns:
        PolygonHandle over the CCW vertex sequence

    Raises:
        InvalidQuery: Fewer than 3 vertices
        NotSimple, NotCCW, ViewpointOutside, DegenerateInput: Validation failures
    """
    verts = tuple(vertices)
    n = len(verts)
    if n < 3:
        raise InvalidQuery(f"a polygon needs at least 3 vertices, got {n}")
    if strict is None:
        strict = n <= STRICT_LIMIT

    area = signed_area2(verts)
    if area == 0:
        raise NotSimple("polygon has zero area")
    was_reversed = False
    if area < 0:
        if not reverse_cw:
            raise NotCCW("vertices are in clockwise order")
        verts = tuple(reversed(verts))
        was_reversed = True
        logger.debug("Reversed clockwise input of %d vertices", n)

    if strict:
        check_simple(verts)
    check_viewpoint(verts, q)
    return PolygonHandle(verts, q, was_reversed)


def parse_polygon(text: str) -> Tuple[List[Point], Point]:
    """
    Parse the polygon text format: ``n``, n lines ``x y``, then ``q x y``.

    Lines starting with '#' and blank lines are skipped. Coordinates may be
    integers, decimals or ``p/q`` rationals and are read exactly.

    Raises:
        PolygonParseError: On malformed content, with the offending line number
    """
    lines = [
        (no, raw.strip()) for no, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith('#')
    ]
    if not lines:
        raise PolygonParseError("empty polygon file")

    no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise PolygonParseError(f"expected vertex count, got {head!r}", no)
    if n < 3:
        raise PolygonParseError(f"vertex count must be at least 3, got {n}", no)
    if len(lines) != n + 2:
        raise PolygonParseError(
            f"expected {n} vertex lines and a viewpoint line, got {len(lines) - 1} lines", lines[-1][0]
        )

    def scalars(no: int, parts: List[str]) -> Point:
        if len(parts) != 2:
            raise PolygonParseError(f"expected two coordinates, got {len(parts)}", no)
        try:
            return Point(Fraction(parts[0]), Fraction(parts[1]))
        except (ValueError, ZeroDivisionError):
            raise PolygonParseError(f"invalid coordinate in {' '.join(parts)!r}", no)

    vertices = [scalars(no, line.split()) for no, line in lines[1:n + 1]]
    no, last = lines[n + 1]
    parts = last.split()
    if not parts or parts[0] != 'q':
        raise PolygonParseError("expected viewpoint line 'q x y'", no)
    return vertices, scalars(no, parts[1:])


def format_polygon(vertices: Sequence[Point], q: Point, comment: Optional[str] = None) -> str:
    """Serialize to the polygon text format with exact rationals."""
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(str(len(vertices)))
    out.extend(f"{format_scalar(v.x)} {format_scalar(v.y)}" for v in vertices)
    out.append(f"q {format_scalar(q.x)} {format_scalar(q.y)}")
    return "\n".join(out) + "\n"


def read_polygon(path: Path) -> Tuple[List[Point], Point]:
    """
    Read and parse a polygon file.

    Raises:
        PolygonParseError: If the file is not UTF-8 text or is malformed
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise PolygonParseError(f"{path} is not UTF-8 text (byte {e.start})")
    return parse_polygon(text)


def write_polygon(path: Path, vertices: Sequence[Point], q: Point,
                  comment: Optional[str] = None) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_polygon(vertices, q, comment))


def load_file(path: Path, strict: Optional[bool] = None) -> PolygonHandle:
    """Read and validate a polygon file."""
    vertices, q = read_polygon(path)
    return load(vertices, q, strict=strict)
