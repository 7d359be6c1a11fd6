"""Run, verify and benchmark orchestration."""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import InvalidQuery
from .events import EventCollector, VisEvent, events_digest, shadow_count
from .geometry import Point
from .polygon_store import Chain, PolygonHandle, QueryContext, format_polygon, load
from ..algorithms.constant import vis_polygon
from ..algorithms.dnc import (
    DncConfig,
    PartitionHook,
    PartitionStats,
    PartitionVariant,
    SplitHook,
    acceptable_rank,
    vis_polygon_dnc,
)
from ..algorithms.visibility_core import ReflexClass, classify_at
from ..reference.oracle import oracle_vis, oracle_vis_chain, rank_oracle
from ..utils.logger import fields, get_logger

logger = get_logger(__name__)


@dataclass
class RunOptions:
    """Per-run knobs passed to an algorithm."""

    s: int = 1
    seed: int = 0
    debug: bool = False
    on_split: Optional[SplitHook] = None
    on_partition: Optional[PartitionHook] = None


AlgorithmFn = Callable[[PolygonHandle, QueryContext, Callable[[VisEvent], None], RunOptions, PartitionStats], None]

ALGORITHMS: Dict[str, AlgorithmFn] = {}


def register_algorithm(name: str) -> Callable[[AlgorithmFn], AlgorithmFn]:
    """Decorator adding an algorithm to the registry under ``name``."""
    def decorator(fn: AlgorithmFn) -> AlgorithmFn:
        ALGORITHMS[name] = fn
        return fn
    return decorator


@register_algorithm("const")
def _run_const(h, ctx, sink, options, stats):
    vis_polygon(h, ctx, sink)


@register_algorithm("dnc-det")
def _run_dnc_det(h, ctx, sink, options, stats):
    cfg = DncConfig(options.s, PartitionVariant.DETERMINISTIC, options.seed)
    vis_polygon_dnc(h, cfg, ctx, sink, stats=stats,
                    on_split=options.on_split, on_partition=options.on_partition)


@register_algorithm("dnc-rand")
def _run_dnc_rand(h, ctx, sink, options, stats):
    cfg = DncConfig(options.s, PartitionVariant.RANDOMIZED, options.seed)
    vis_polygon_dnc(h, cfg, ctx, sink, stats=stats,
                    on_split=options.on_split, on_partition=options.on_partition)


@dataclass
class RunReport:
    """Counters and digest for one algorithm run."""

    family: str
    n: int
    r: int
    r_out: int
    algo: str
    s: int
    seed: int
    access_count: int
    ws_peak: int
    depth_peak: int
    wall_ns: int
    retries: int
    passes: int
    digest: str
    partition_calls: int = 0
    max_coordinate_bits: int = 0

    def csv_row(self) -> List:
        return [
            self.family, self.n, self.r, self.r_out, self.algo, self.s, self.seed,
            self.access_count, self.ws_peak, self.depth_peak, self.wall_ns,
            self.retries, self.passes, self.digest,
        ]


@dataclass
class Instance:
    """A named polygon to run on."""

    label: str
    family: str
    vertices: List[Point]
    q: Point

    def handle(self, strict: Optional[bool] = None) -> PolygonHandle:
        return load(self.vertices, self.q, strict=strict)

    def replay_text(self) -> str:
        return format_polygon(self.vertices, self.q, comment=self.label)


def reflex_count(h: PolygonHandle) -> int:
    """Number of vertices reflex with respect to q (direct reads, not metered)."""
    verts = h.vertices
    n = h.n
    return sum(
        1 for i in range(n)
        if classify_at(h.q, verts[i - 1], verts[i], verts[(i + 1) % n]) is not ReflexClass.NOT_REFLEX
    )


def run(h: PolygonHandle, algo: str, options: Optional[RunOptions] = None,
        family: str = "file") -> Tuple[List[VisEvent], RunReport]:
    """
    Run one registered algorithm and collect its events and counters.

    Args:
        h: Polygon handle
        algo: Registered algorithm name
        options: s, seed, debug flag and hooks
        family: Label for the report

    Returns:
        (events, report)

    Raises:
        InvalidQuery: If the algorithm is not registered
    """
    if algo not in ALGORITHMS:
        raise InvalidQuery(f"unknown algorithm {algo!r}; choose from {', '.join(sorted(ALGORITHMS))}")
    options = options or RunOptions()
    ctx = QueryContext(debug=options.debug)
    stats = PartitionStats()
    sink = EventCollector()

    start = time.perf_counter_ns()
    ALGORITHMS[algo](h, ctx, sink, options, stats)
    wall_ns = time.perf_counter_ns() - start

    events = sink.events
    report = RunReport(
        family=family,
        n=h.n,
        r=reflex_count(h),
        r_out=shadow_count(events),
        algo=algo,
        s=options.s,
        seed=options.seed,
        access_count=ctx.access_count,
        ws_peak=ctx.ws_peak,
        depth_peak=ctx.depth_peak,
        wall_ns=wall_ns,
        retries=stats.retries,
        passes=stats.passes,
        digest=events_digest(events),
        partition_calls=stats.calls,
        max_coordinate_bits=ctx.max_coordinate_bits,
    )
    logger.debug("run %s", fields(algo=algo, family=family, n=h.n, accesses=ctx.access_count,
                                  ws_peak=ctx.ws_peak, depth=ctx.depth_peak, bits=ctx.max_coordinate_bits))
    return events, report


@dataclass
class Mismatch:
    """First difference found for one run, with the instance serialized for replay."""

    instance: str
    algo: str
    s: int
    seed: int
    reason: str
    replay: str

    def to_dict(self) -> Dict:
        return {
            "instance": self.instance,
            "algo": self.algo,
            "s": self.s,
            "seed": self.seed,
            "reason": self.reason,
            "replay": self.replay,
        }


@dataclass
class VerifySummary:
    """Outcome of a verify run."""

    instances: int = 0
    runs: int = 0
    partition_checks: int = 0
    split_checks: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict:
        return {
            "instances": self.instances,
            "runs": self.runs,
            "partition_checks": self.partition_checks,
            "split_checks": self.split_checks,
            "mismatches": len(self.mismatches),
            "first_mismatch": self.mismatches[0].to_dict() if self.mismatches else None,
        }


def _combos(algos: Sequence[str], s_values: Sequence[int], seeds: Sequence[int]):
    for algo in algos:
        if algo == "const":
            yield algo, 1, 0
            continue
        for s in s_values:
            for seed in (seeds if algo == "dnc-rand" else seeds[:1]):
                yield algo, s, seed


def _verify_instance(inst: Instance, algos: Sequence[str], s_values: Sequence[int],
                     seeds: Sequence[int], check_contracts: bool, strict: Optional[bool]) -> VerifySummary:
    summary = VerifySummary(instances=1)
    h = inst.handle(strict)
    expected = oracle_vis(h)

    for algo, s, seed in _combos(algos, s_values, seeds):
        problems: List[str] = []

        def on_partition(chain: Chain, v: int, k: int) -> None:
            smaller, greater = rank_oracle(h, chain, v)
            summary.partition_checks += 1
            if not acceptable_rank(smaller, greater, k):
                problems.append(f"partition vertex {v} has rank ({smaller}, {greater}) among {k}")

        def on_split(chain: Chain, left: Chain, right: Chain, x) -> None:
            summary.split_checks += 1
            merged: List[VisEvent] = []
            for event in oracle_vis_chain(h, left) + oracle_vis_chain(h, right):
                if event not in merged:
                    merged.append(event)
            if merged != _dedup(oracle_vis_chain(h, chain)):
                problems.append(f"split at {x} changes the chain output")

        options = RunOptions(s=s, seed=seed)
        if check_contracts:
            options.on_partition = on_partition
            options.on_split = on_split
        events, _ = run(h, algo, options, family=inst.family)
        summary.runs += 1
        if events != expected:
            problems.insert(0, _first_difference(events, expected))
        if problems:
            summary.mismatches.append(Mismatch(inst.label, algo, s, seed, problems[0], inst.replay_text()))
    return summary


def _dedup(events: List[VisEvent]) -> List[VisEvent]:
    seen = set()
    out: List[VisEvent] = []
    for event in events:
        if event not in seen:
            seen.add(event)
            out.append(event)
    return out


def _first_difference(got: List[VisEvent], expected: List[VisEvent]) -> str:
    for i, (a, b) in enumerate(zip(got, expected)):
        if a != b:
            return f"event {i}: got {a}, expected {b}"
    return f"length {len(got)} != expected {len(expected)}"


def _verify_job(job) -> VerifySummary:
    inst, algos, s_values, seeds, check_contracts, strict = job
    logger.debug("Verifying %s", inst.label)
    return _verify_instance(inst, algos, s_values, seeds, check_contracts, strict)


def _bench_job(job) -> RunReport:
    inst, algo, s, seed, strict = job
    _, report = run(inst.handle(strict), algo, RunOptions(s=s, seed=seed), family=inst.family)
    return report


def _fan_out(fn: Callable, jobs: List, workers: int) -> List:
    """Map fn over jobs in order, in worker processes when workers > 1."""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    workers = min(workers, len(jobs))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def verify(instances: Sequence[Instance], algos: Sequence[str], s_values: Sequence[int] = (1,),
           seeds: Sequence[int] = (0,), check_contracts: bool = False,
           strict: Optional[bool] = None, threads: int = 1) -> VerifySummary:
    """
    Compare every (algorithm, s, seed) combination against the oracle on each instance.

    Args:
        instances: Polygons to check
        algos: Registered algorithm names
        s_values: Workspace parameters for the divide-and-conquer algorithms
        seeds: RNG seeds for the randomized variant
        check_contracts: Also check every partition rank and split against the oracle
        strict: Strict load validation
        threads: Worker processes; the checks are CPU-bound

    Returns:
        VerifySummary with all mismatches, ordered by instance
    """
    for algo in algos:
        if algo not in ALGORITHMS:
            raise InvalidQuery(f"unknown algorithm {algo!r}")

    jobs = [(inst, tuple(algos), tuple(s_values), tuple(seeds), check_contracts, strict) for inst in instances]
    parts = _fan_out(_verify_job, jobs, threads)

    total = VerifySummary()
    for part in parts:
        total.instances += part.instances
        total.runs += part.runs
        total.partition_checks += part.partition_checks
        total.split_checks += part.split_checks
        total.mismatches.extend(part.mismatches)
    logger.info("Verified %d instances, %d runs, %d mismatches",
                total.instances, total.runs, len(total.mismatches))
    return total


def bench(instances: Sequence[Instance], algos: Sequence[str], s_values: Sequence[int] = (1,),
          seeds: Sequence[int] = (0,), repetitions: int = 1, strict: Optional[bool] = None,
          threads: int = 1) -> List[RunReport]:
    """Run every combination ``repetitions`` times; rows are sorted by key."""
    jobs = []
    for inst in instances:
        for algo, s, seed in _combos(algos, s_values, seeds):
            for _ in range(repetitions):
                jobs.append((inst, algo, s, seed, strict))

    reports = _fan_out(_bench_job, jobs, threads)
    logger.info("Benchmarked %d runs", len(reports))
    return sorted(reports, key=lambda r: (r.family, r.n, r.algo, r.s, r.seed))
