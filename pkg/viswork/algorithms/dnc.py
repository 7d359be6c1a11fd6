"""
Divide-and-conquer visibility with O(s) workspace.

A chain with more than two reflex vertices in its cone is split at the ray
through a partition vertex whose angle is a 2/3-median of the candidates, and
both halves are handled the same way until the depth cap is reached, where the
constant-workspace algorithm takes over.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from typing import Callable, Iterator, List, Optional, Tuple

from ..core.errors import InternalError, InvalidQuery
from ..core.events import EventSink, P0Event
from ..core.geometry import Ordering, Point, PseudoAngle, cmp_ccw_angle, in_cone, same_direction
from ..core.polygon_store import (
    BoundaryPoint,
    Chain,
    PolygonHandle,
    QueryContext,
    VertexPoint,
    point_of,
    ws_scope,
)
from .constant import vis_chain
from .rng import SplitMix64
from .visibility_core import find_p0, interior_vertices, is_shadow_point, ray_shoot

DNC_BASE_WORDS = 6
DNC_FRAME_WORDS = 5
COUNT_WORDS = 4
RAND_PARTITION_WORDS = 6
# reference direction, interval bounds, rank bookkeeping and loop indices
DET_PARTITION_WORDS = 16
# per pivot: vertex index, two coordinates and a rank counter
PIVOT_SLOT_WORDS = 4
MAX_PIVOTS = 64

# Bound on ws_peak(s) - ws_peak(s - 1): the depth cap grows by at most two
# frames per unit of s and the pivot budget by at most two slots.
WORKSPACE_SLOPE = 2 * DNC_FRAME_WORDS + 2 * PIVOT_SLOT_WORDS


class PartitionVariant(Enum):
    DETERMINISTIC = "det"
    RANDOMIZED = "rand"


@dataclass
class DncConfig:
    """Workspace parameter and partition strategy."""

    s: int = 1
    variant: PartitionVariant = PartitionVariant.DETERMINISTIC
    seed: int = 0

    def __post_init__(self):
        if self.s < 1:
            raise InvalidQuery(f"workspace parameter s must be at least 1, got {self.s}")

    @property
    def pivot_budget(self) -> int:
        return min(2 * self.s, 2 ** min(self.s, 7), MAX_PIVOTS)


@dataclass
class PartitionStats:
    """Counters for partition-vertex selection."""

    calls: int = 0
    retries: int = 0
    passes: int = 0
    ranks: List[Tuple[int, int, int]] = field(default_factory=list)

    def record(self, smaller: int, greater: int, k: int) -> None:
        self.ranks.append((smaller, greater, k))


SplitHook = Callable[[Chain, Chain, Chain, BoundaryPoint], None]
PartitionHook = Callable[[Chain, int, int], None]


def depth_cap(s: int, r: int) -> int:
    """
    Recursion depth cap: the smaller of ceil(s * log_1.5 2) and ceil(log_1.5 max(r, 2)).

    Both ceilings are computed in integers.
    """
    if s < 1:
        raise InvalidQuery(f"workspace parameter s must be at least 1, got {s}")
    h1 = 0
    while 3 ** h1 < 2 ** (h1 + s):
        h1 += 1
    bound = max(r, 2)
    h2 = 0
    while 3 ** h2 < bound * 2 ** h2:
        h2 += 1
    return min(h1, h2)


def acceptable_rank(smaller: int, greater: int, k: int) -> bool:
    """The 2/3-median contract: at most 2k/3 on either side."""
    return 3 * smaller <= 2 * k and 3 * greater <= 2 * k


def _cone_candidates(h: PolygonHandle, c: Chain, ctx: QueryContext) -> Iterator[Tuple[int, Point]]:
    # Reflex vertices strictly inside the cone; the bounding rays are excluded
    q = h.q
    pa = point_of(h, c.start, ctx)
    pb = point_of(h, c.end, ctx)
    for idx, pt, _, kind in interior_vertices(h, c, ctx):
        if not kind.is_reflex:
            continue
        if same_direction(q, pa, pt) or same_direction(q, pb, pt):
            continue
        if in_cone(q, pa, pb, pt):
            yield idx, pt


def count_reflex_in_cone(h: PolygonHandle, c: Chain, ctx: QueryContext) -> int:
    """Number of reflex vertices of c inside its cone, in one scan."""
    with ws_scope(ctx, COUNT_WORDS):
        return sum(1 for _ in _cone_candidates(h, c, ctx))


def _start_direction(h: PolygonHandle, c: Chain, ctx: QueryContext) -> PseudoAngle:
    return PseudoAngle.towards(h.q, point_of(h, c.start, ctx))


def _rank(h: PolygonHandle, c: Chain, ctx: QueryContext, v: int, pv: Point) -> Tuple[int, int]:
    ref = _start_direction(h, c, ctx)
    smaller = greater = 0
    for idx, pt in _cone_candidates(h, c, ctx):
        if idx == v:
            continue
        order = cmp_ccw_angle(h.q, ref, pt, pv)
        if order == Ordering.LT:
            smaller += 1
        elif order == Ordering.GT:
            greater += 1
    return smaller, greater


def find_partition_vertex_rand(h: PolygonHandle, c: Chain, rng: SplitMix64, ctx: QueryContext,
                               stats: PartitionStats, k: Optional[int] = None) -> int:
    """
    Pick uniformly random candidates until one is a 2/3-median.

    Raises:
        InternalError: After 64k rejected draws
    """
    if k is None:
        k = count_reflex_in_cone(h, c, ctx)
    stats.calls += 1
    with ws_scope(ctx, RAND_PARTITION_WORDS):
        for _ in range(64 * k):
            i = rng.randint(1, k)
            chosen = None
            for pos, cand in enumerate(_cone_candidates(h, c, ctx), start=1):
                if pos == i:
                    chosen = cand
                    break
            if chosen is None:
                raise InternalError(f"candidate {i} of {k} not found on the chain")
            smaller, greater = _rank(h, c, ctx, chosen[0], chosen[1])
            if acceptable_rank(smaller, greater, k):
                stats.record(smaller, greater, k)
                return chosen[0]
            stats.retries += 1
    raise InternalError(f"no 2/3-median found after {64 * k} random draws among {k} candidates")


def find_partition_vertex_det(h: PolygonHandle, c: Chain, cfg: DncConfig, ctx: QueryContext,
                              stats: PartitionStats, k: Optional[int] = None) -> int:
    """
    Deterministic 2/3-median by multi-pass narrowing of an angular interval.

    Each pass samples the first ``p`` candidates inside the interval as pivots
    and ranks them in one more scan. A pivot of acceptable rank is returned;
    otherwise the interval shrinks to the pivots bracketing the middle rank.
    Once the interval holds at most ``p`` candidates they are ranked directly.

    Args:
        h: Polygon handle
        c: Independent chain
        cfg: Configuration; ``cfg.pivot_budget`` bounds the pivot slots
        ctx: Query context
        stats: Counters updated in place
        k: Candidate count if already known

    Returns:
        Index of the partition vertex

    Raises:
        InternalError: If narrowing does not finish within 4k passes
    """
    if k is None:
        k = count_reflex_in_cone(h, c, ctx)
    p = cfg.pivot_budget
    q = h.q
    target = (k - 1) // 2
    stats.calls += 1

    with ws_scope(ctx, DET_PARTITION_WORDS + PIVOT_SLOT_WORDS * p):
        ref = _start_direction(h, c, ctx)

        def compare(a: Point, b: Point) -> int:
            return int(cmp_ccw_angle(q, ref, a, b))

        lo: Optional[Point] = None
        hi: Optional[Point] = None
        below = 0
        inside = k

        def within(pt: Point) -> bool:
            return (lo is None or compare(pt, lo) > 0) and (hi is None or compare(pt, hi) < 0)

        for _ in range(4 * k):
            stats.passes += 1
            slots: List[Tuple[int, Point]] = []
            for cand in _cone_candidates(h, c, ctx):
                if within(cand[1]):
                    slots.append(cand)
                    if len(slots) == p:
                        break

            if inside <= p:
                slots.sort(key=cmp_to_key(lambda a, b: compare(a[1], b[1])))
                v = slots[target - below][0]
                stats.record(target, k - 1 - target, k)
                return v

            # ranks[j] is the global rank of slot j
            ranks = [below] * len(slots)
            for _, pt in _cone_candidates(h, c, ctx):
                if not within(pt):
                    continue
                for j, (_, sp) in enumerate(slots):
                    if compare(pt, sp) < 0:
                        ranks[j] += 1

            best = None
            for j, rank in enumerate(ranks):
                if acceptable_rank(rank, k - 1 - rank, k):
                    if best is None or abs(rank - target) < abs(ranks[best] - target):
                        best = j
            if best is not None:
                stats.record(ranks[best], k - 1 - ranks[best], k)
                return slots[best][0]

            jl = ju = None
            for j, rank in enumerate(ranks):
                if rank < target and (jl is None or rank > ranks[jl]):
                    jl = j
                elif rank > target and (ju is None or rank < ranks[ju]):
                    ju = j
            hi_rank = below + inside
            if jl is not None:
                lo, below = slots[jl][1], ranks[jl] + 1
            if ju is not None:
                hi, hi_rank = slots[ju][1], ranks[ju]
            inside = hi_rank - below

    raise InternalError(f"deterministic partition did not converge among {k} candidates")


def vis_dnc(h: PolygonHandle, c: Chain, cfg: DncConfig, ctx: QueryContext, sink: EventSink,
            d: int = 1, *, report_end: bool = False, stats: Optional[PartitionStats] = None,
            rng: Optional[SplitMix64] = None, on_split: Optional[SplitHook] = None,
            on_partition: Optional[PartitionHook] = None) -> None:
    """
    Report the visibility of an independent chain by divide and conquer.

    The recursion runs on an explicit stack whose ``depth_cap`` frames are
    charged to the workspace up front. A split point is reported by the left
    half only when it is the shadow of the partition vertex.

    Args:
        h: Polygon handle
        c: Independent chain
        cfg: Workspace parameter and partition variant
        ctx: Query context
        sink: Event consumer
        d: Depth of this call
        report_end: Also report the chain end
        stats: Partition counters
        rng: Generator for the randomized variant (seeded from cfg.seed if omitted)
        on_split: Called with (chain, left, right, split point) on every split
        on_partition: Called with (chain, vertex, k) on every partition choice
    """
    if stats is None:
        stats = PartitionStats()
    if rng is None:
        rng = SplitMix64(cfg.seed)

    with ws_scope(ctx, DNC_BASE_WORDS):
        k_top = count_reflex_in_cone(h, c, ctx)
        cap = depth_cap(cfg.s, k_top)
        with ws_scope(ctx, DNC_FRAME_WORDS * cap):
            stack = [(c, d, report_end, k_top)]
            while stack:
                chain, depth, rep, k = stack.pop()
                if depth > cap:
                    raise InternalError(f"recursion depth {depth} exceeds cap {cap}")
                ctx.set_depth(depth)
                if k is None:
                    k = count_reflex_in_cone(h, chain, ctx)

                if k <= 2 or depth >= cap:
                    vis_chain(h, chain, ctx, sink, report_end=rep)
                    continue

                if cfg.variant is PartitionVariant.RANDOMIZED:
                    v = find_partition_vertex_rand(h, chain, rng, ctx, stats, k)
                else:
                    v = find_partition_vertex_det(h, chain, cfg, ctx, stats, k)
                if on_partition is not None:
                    on_partition(chain, v, k)

                x = ray_shoot(h, chain, VertexPoint(v), ctx)
                left = Chain(chain.start, x)
                right = Chain(x, chain.end)
                if on_split is not None:
                    on_split(chain, left, right, x)
                stack.append((right, depth + 1, rep, None))
                stack.append((left, depth + 1, is_shadow_point(h, x, ctx), None))
            ctx.set_depth(0)


def vis_polygon_dnc(h: PolygonHandle, cfg: DncConfig, ctx: QueryContext, sink: EventSink,
                    **kwargs) -> None:
    """Whole polygon: P0, then divide and conquer on the closed chain."""
    p0 = find_p0(h, ctx)
    sink(P0Event(p0.point))
    vis_dnc(h, Chain(p0, p0, wraps=True), cfg, ctx, sink, **kwargs)
