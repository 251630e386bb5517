from __future__ import annotations

from itertools import combinations

import networkx as nx
from hypothesis import strategies as st

from erdos_sos.graph import Graph, Tree, build_graph


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(n, chosen)


@st.composite
def trees(draw, min_k: int = 1, max_k: int = 10) -> Tree:
    k = draw(st.integers(min_k, max_k))
    parents = [-1] + [draw(st.integers(0, v - 1)) for v in range(1, k)]
    return Tree.from_parents(parents)


def to_nx(G: Graph | Tree) -> nx.Graph:
    H = nx.Graph()
    n = G.n if isinstance(G, Graph) else G.order
    H.add_nodes_from(range(n))
    H.add_edges_from(G.edges if isinstance(G, Tree) else G.edges())
    return H
