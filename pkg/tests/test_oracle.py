import pytest

from viswork.core.errors import ChainNotIndependent
from viswork.core.events import VertexEvent
from viswork.core.polygon_store import Chain, VertexPoint
from viswork.reference.oracle import oracle_candidates, oracle_vis, oracle_vis_chain, rank_oracle

from .conftest import L6_EVENTS, SQ4_EVENTS
from .test_visibility_core import closed_chain


def test_l_shape(l6):
    assert oracle_vis(l6) == L6_EVENTS


def test_square(sq4):
    assert oracle_vis(sq4) == SQ4_EVENTS


def test_hidden_endpoint(l6):
    with pytest.raises(ChainNotIndependent):
        oracle_vis_chain(l6, Chain(VertexPoint(2), VertexPoint(4)))


def test_open_chain_includes_both_endpoints(l6):
    events = oracle_vis_chain(l6, Chain(VertexPoint(0), VertexPoint(2)))
    assert events == [VertexEvent(0), VertexEvent(1), VertexEvent(2)]


def test_candidates(l6, sq4):
    assert [idx for idx, _ in oracle_candidates(l6, closed_chain(l6))] == [3]
    assert oracle_candidates(sq4, closed_chain(sq4)) == []


def test_rank_of_only_candidate(l6):
    assert rank_oracle(l6, closed_chain(l6), 3) == (0, 0)
