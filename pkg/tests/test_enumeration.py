from __future__ import annotations

import io
from collections import Counter
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erdos_sos.enumeration.canonical import canonical_form, canonical_graph
from erdos_sos.enumeration.graphs import all_graphs_upto_iso
from erdos_sos.enumeration.oracles import (all_roots_code, free_tree_count_prufer,
                                           graph_class_count_bruteforce)
from erdos_sos.enumeration.random import (PROFILES, InstanceStream, edge_threshold,
                                          random_instance, random_tree, substream)
from erdos_sos.enumeration.trees import (all_free_trees, canonical_tree, format_parents,
                                         parse_parents, prufer_decode, prufer_encode,
                                         read_trees, tree_code, write_trees)
from erdos_sos.errors import CapExceeded, ParseError, TargetInfeasible
from erdos_sos.graph import Tree, avedeg, build_graph, tree_diameter

from conftest import graphs, to_nx, trees


@pytest.mark.parametrize("k", range(1, 11))
def test_free_tree_counts_match_prufer_oracle(k):
    assert sum(1 for _ in all_free_trees(k)) == free_tree_count_prufer(k)


@pytest.mark.parametrize("k", range(2, 11))
def test_free_trees_agree_with_networkx(k):
    ours = {all_roots_code(T) for T in all_free_trees(k)}
    theirs = sum(1 for _ in nx.nonisomorphic_trees(k))
    assert len(ours) == theirs == sum(1 for _ in all_free_trees(k))


def test_known_tree_count():
    assert free_tree_count_prufer(9) == 47


@pytest.mark.parametrize("n", range(1, 7))
def test_graph_counts_match_brute_force(n):
    assert sum(1 for _ in all_graphs_upto_iso(n)) == graph_class_count_bruteforce(n)


def test_graph_counts_by_edges_match_atlas():
    atlas = Counter((H.number_of_nodes(), H.number_of_edges()) for H in nx.graph_atlas_g())
    for n in range(1, 8):
        ours = Counter((n, G.m) for G in all_graphs_upto_iso(n))
        assert ours == Counter({key: c for key, c in atlas.items() if key[0] == n})


def test_min_edges_filter():
    assert graph_class_count_bruteforce(5) == 34
    for m in range(0, 11):
        assert (sum(1 for _ in all_graphs_upto_iso(5, m))
                == graph_class_count_bruteforce(5, m))


def test_caps():
    with pytest.raises(CapExceeded):
        list(all_graphs_upto_iso(10))
    with pytest.raises(CapExceeded):
        list(all_free_trees(13))


@settings(max_examples=100)
@given(graphs(max_n=8), st.randoms())
def test_canonical_form_is_relabelling_invariant(G, rnd):
    perm = list(range(G.n))
    rnd.shuffle(perm)
    H = build_graph(G.n, [(perm[u], perm[v]) for u, v in G.edges()])
    assert canonical_form(G) == canonical_form(H)
    assert nx.is_isomorphic(to_nx(canonical_graph(G)), to_nx(G))


@settings(max_examples=100)
@given(graphs(min_n=2, max_n=7), graphs(min_n=2, max_n=7))
def test_canonical_form_separates_classes(G, H):
    same = G.n == H.n and nx.is_isomorphic(to_nx(G), to_nx(H))
    assert (canonical_form(G) == canonical_form(H)) == same


@given(trees(min_k=2, max_k=12))
def test_prufer_round_trip(T):
    code = prufer_encode(T)
    U = prufer_decode(code, T.order)
    assert sorted(map(sorted, U.edges)) == sorted(map(sorted, T.edges))


@given(trees(max_k=12), st.randoms())
def test_tree_code_is_relabelling_invariant(T, rnd):
    perm = list(range(T.order))
    rnd.shuffle(perm)
    U = Tree(T.order, tuple((perm[a], perm[b]) for a, b in T.edges))
    assert tree_code(T) == tree_code(U)
    assert all_roots_code(T) == all_roots_code(U)
    assert tree_code(canonical_tree(T)) == tree_code(T)


def test_tree_file_round_trip():
    buf = io.StringIO()
    ts = list(all_free_trees(6))
    write_trees(ts, buf)
    back = read_trees(buf.getvalue().splitlines())
    assert [tree_code(T) for T in back] == [tree_code(T) for T in ts]
    assert format_parents(back[0]) == buf.getvalue().splitlines()[0]


def test_parent_parse_errors():
    with pytest.raises(ParseError) as exc:
        parse_parents("-1 0 x", 4)
    assert (exc.value.line, exc.value.column) == (4, 6)
    with pytest.raises(ParseError):
        parse_parents("-1 -1 0")
    with pytest.raises(ParseError):
        parse_parents("")


def test_substreams_are_independent_of_order():
    a = substream(7, 3).integers(0, 1 << 30, size=4)
    substream(7, 2).integers(0, 10)
    b = substream(7, 3).integers(0, 1 << 30, size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, substream(7, 4).integers(0, 1 << 30, size=4))


@pytest.mark.parametrize("profile", PROFILES + ("mixed", "balanced"))
def test_random_instances_meet_the_standing_hypotheses(profile):
    for k in (9, 10, 11):
        for i in range(25):
            inst = random_instance(k + 4, k, seed=11, index=i, profile=profile)
            assert inst.G.n == k + 4 and inst.T.order == k
            assert avedeg(inst.G) > k - 2
            assert inst.G.m >= edge_threshold(k)
            assert tree_diameter(inst.T) >= 5


def test_random_instance_is_reproducible():
    a = random_instance(13, 9, 5, 17, profile="mixed")
    b = random_instance(13, 9, 5, 17, profile="mixed")
    assert a == b


@pytest.mark.parametrize("offset", [3, 2, 1, 0, -1])
def test_delta_target(offset):
    k = 10
    inst = random_instance(k + 4, k, 2, 0, delta_target=k + offset)
    assert max(inst.G.degrees()) == k + offset


def test_random_instance_requires_n_equal_k_plus_4():
    with pytest.raises(TargetInfeasible):
        random_instance(12, 9, 0, 0)


def test_edge_threshold_is_the_least_count():
    for k in range(3, 30):
        n = k + 4
        m = edge_threshold(k)
        assert Fraction(2 * m, n) > k - 2 >= Fraction(2 * (m - 1), n)


def test_random_tree_diameter_floor():
    rng = substream(0, 0)
    assert all(tree_diameter(random_tree(9, rng, min_diameter=5)) >= 5 for _ in range(30))


def test_instance_stream_random_and_exhaustive():
    s = InstanceStream(13, 9, seed=3, count=5)
    got = list(s)
    assert [i for i, _ in got] == list(range(5))
    assert got[2][1] == random_instance(13, 9, 3, 2)
    ex = list(InstanceStream(4, 3, mode="exhaustive"))
    assert len(ex) == 11
