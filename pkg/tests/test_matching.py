from __future__ import annotations

import networkx as nx
from hypothesis import given
from hypothesis import strategies as st

from erdos_sos.graph import bits
from erdos_sos.matching import bipartite_match

rows = st.lists(st.integers(0, (1 << 7) - 1), max_size=7)


def _max_matching(cands: list[int]) -> int:
    B = nx.Graph()
    left = [("L", i) for i in range(len(cands))]
    B.add_nodes_from(left)
    for i, c in enumerate(cands):
        for x in bits(c):
            B.add_edge(("L", i), ("R", x))
    return len(nx.bipartite.maximum_matching(B, top_nodes=left)) // 2


@given(rows)
def test_saturates_exactly_when_networkx_does(cands):
    res = bipartite_match(cands)
    full = _max_matching(cands) == len(cands)
    assert (res.assignment is not None) == full
    if res.assignment is not None:
        assert len(set(res.assignment)) == len(cands)
        assert all(cands[i] >> x & 1 for i, x in enumerate(res.assignment))


@given(rows)
def test_violator_is_a_hall_witness(cands):
    res = bipartite_match(cands)
    if res.assignment is None:
        joint = 0
        for i in res.violator:
            joint |= cands[i]
        assert joint == res.neighbourhood
        assert joint.bit_count() < len(res.violator)


def test_small_cases():
    assert bipartite_match([]).assignment == ()
    assert bipartite_match([0b11, 0b01]).assignment == (1, 0)
    res = bipartite_match([0b1, 0b1, 0b110])
    assert res.assignment is None and res.violator == frozenset({0, 1})
