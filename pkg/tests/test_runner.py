import pytest

from viswork.core.errors import InvalidQuery
from viswork.core.events import ShadowEvent, VertexEvent, events_digest
from viswork.core.geometry import ray_segment_intersection, same_direction
from viswork.core.polygon_store import load
from viswork.core.runner import ALGORITHMS, Instance, RunOptions, bench, reflex_count, run, verify
from viswork.generators.testgen import gen_comb, gen_convex

from .conftest import L6_EVENTS, L6_Q, L6_VERTICES


def instances():
    out = [Instance("l6", "file", L6_VERTICES, L6_Q)]
    for m in (3, 6):
        out.append(Instance(f"comb-{m}", "comb", *gen_comb(m)))
    out.append(Instance("convex-8", "convex", *gen_convex(8, seed=1)))
    return out


@pytest.mark.parametrize("algo", ["const", "dnc-det", "dnc-rand"])
def test_run(l6, algo):
    events, report = run(l6, algo, RunOptions(s=2, seed=3), family="l6")
    assert events == L6_EVENTS
    assert report.digest == events_digest(L6_EVENTS)
    assert report.n == 6
    assert report.r == reflex_count(l6) == 1
    assert report.r_out == 1
    assert report.algo == algo
    assert report.access_count > 0
    assert report.ws_peak > 0
    assert report.wall_ns >= 0


def test_unknown_algorithm(l6):
    with pytest.raises(InvalidQuery):
        run(l6, "sweep")


def test_verify_all_algorithms():
    summary = verify(instances(), ["const", "dnc-det", "dnc-rand"], s_values=[1, 2], seeds=[0, 1])
    assert summary.ok, summary.to_dict()
    assert summary.instances == 4
    # const once, dnc-det per s, dnc-rand per (s, seed)
    assert summary.runs == 4 * (1 + 2 + 4)


def test_verify_checks_contracts():
    summary = verify(instances(), ["dnc-det", "dnc-rand"], s_values=[1], check_contracts=True)
    assert summary.ok, summary.to_dict()
    assert summary.partition_checks > 0
    assert summary.split_checks == summary.partition_checks


def test_verify_threads_give_the_same_answer():
    one = verify(instances(), ["const", "dnc-det"], s_values=[1])
    many = verify(instances(), ["const", "dnc-det"], s_values=[1], threads=3)
    assert one.to_dict() == many.to_dict()


def test_verify_reports_a_mismatch(monkeypatch):
    def faulty(h, ctx, sink, options, stats):
        sink(VertexEvent(0))

    monkeypatch.setitem(ALGORITHMS, "faulty", faulty)
    summary = verify(instances()[:1], ["faulty"])
    assert not summary.ok
    first = summary.mismatches[0]
    assert first.instance == "l6"
    assert "event 0" in first.reason
    assert first.replay.startswith("# l6\n6\n")


def test_verify_unknown_algorithm():
    with pytest.raises(InvalidQuery):
        verify(instances(), ["sweep"])


def test_bench_rows():
    reports = bench(instances(), ["const", "dnc-det"], s_values=[1, 2], repetitions=2)
    assert len(reports) == 4 * (1 + 2) * 2
    keys = [(r.family, r.n, r.algo, r.s, r.seed) for r in reports]
    assert keys == sorted(keys)
    by_instance = {}
    for r in reports:
        by_instance.setdefault((r.family, r.n), set()).add(r.digest)
    assert all(len(digests) == 1 for digests in by_instance.values())


@pytest.mark.parametrize("algo", ["const", "dnc-det", "dnc-rand"])
@pytest.mark.parametrize("m, seed", [(7, 0), (12, 2), (31, 5)])
def test_every_shadow_comes_from_its_reflex_vertex(algo, m, seed):
    h = load(*gen_comb(m, seed))
    events, _ = run(h, algo, RunOptions(s=2, seed=seed))
    verts = h.vertices
    shadows = [e for e in events if isinstance(e, ShadowEvent)]
    assert shadows
    for e in shadows:
        hit = ray_segment_intersection(h.q, verts[e.reflex], verts[e.edge], verts[(e.edge + 1) % h.n])
        assert hit is not None
        assert hit.point == e.point
        assert same_direction(h.q, verts[e.reflex], e.point)
        assert VertexEvent(e.reflex) in events
