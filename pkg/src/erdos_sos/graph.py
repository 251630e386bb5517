"""Immutable graphs and trees on at most 64 vertices, stored as bitset rows.

Neighbourhoods are Python ints used as bitsets: bit ``j`` of ``adj[i]`` is set
iff ``ij`` is an edge.  Everything here is immutable after construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import BadEdge, CapExceeded, InvalidTree, MissingEdge

MAX_ORDER = 64


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _rows(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    if n < 1 or n > MAX_ORDER:
        raise CapExceeded(f"order {n} outside [1, {MAX_ORDER}]")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise BadEdge(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise BadEdge(f"loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with bitset adjacency rows."""

    n: int
    adj: tuple[int, ...]
    m: int = field(init=False)

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_ORDER:
            raise CapExceeded(f"order {self.n} outside [1, {MAX_ORDER}]")
        if len(self.adj) != self.n:
            raise BadEdge("adjacency row count differs from n")
        total = 0
        for i, row in enumerate(self.adj):
            if row >> self.n:
                raise BadEdge(f"row {i} names vertices beyond n")
            if row >> i & 1:
                raise BadEdge(f"loop at {i}")
            for j in bits(row):
                if not self.adj[j] >> i & 1:
                    raise BadEdge(f"asymmetric adjacency between {i} and {j}")
            total += row.bit_count()
        object.__setattr__(self, "m", total // 2)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.adj[i] >> (i + 1) << (i + 1))]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def complement(self) -> "Graph":
        full = self.full
        return Graph(self.n, tuple((full ^ row) & ~(1 << i) for i, row in enumerate(self.adj)))

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on ``vertices``; new vertex ``i`` is ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        rows = []
        for v in vertices:
            row = 0
            for w in bits(self.adj[v]):
                j = index.get(w)
                if j is not None:
                    row |= 1 << j
            rows.append(row)
        return Graph(len(vertices), tuple(rows))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph on ``range(n)``; duplicate pairs are merged."""
    return Graph(n, tuple(_rows(n, edges)))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << i) for i in range(n)))


def avedeg(G: Graph) -> Fraction:
    """Average degree ``2m/n`` as an exact rational."""
    return Fraction(2 * G.m, G.n)


def degree_stats(G: Graph) -> tuple[int, int, list[int]]:
    """Return ``(min degree, max degree, sorted degree sequence)``.

    The sequence is sorted in non-increasing order.
    """
    seq = sorted(G.degrees(), reverse=True)
    return seq[-1], seq[0], seq


def delete_vertices(G: Graph, D: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Remove ``D`` and relabel the survivors compactly, preserving order.

    Returns the new graph and ``kept``, where new vertex ``i`` was ``kept[i]``.
    """
    dead = mask_of(D)
    if dead >> G.n:
        raise BadEdge("deleted vertex outside the graph")
    kept = tuple(v for v in range(G.n) if not dead >> v & 1)
    if not kept:
        raise CapExceeded("cannot delete every vertex")
    return G.induced(kept), kept


def delete_edges(G: Graph, F: Iterable[tuple[int, int]]) -> Graph:
    """Remove the listed edges; every one of them must be present."""
    rows = list(G.adj)
    for u, v in F:
        if not rows[u] >> v & 1:
            raise MissingEdge(f"edge ({u}, {v}) not in graph")
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
    return Graph(G.n, tuple(rows))


@dataclass(frozen=True)
class Tree:
    """Tree on ``range(order)``."""

    order: int
    edges: tuple[tuple[int, int], ...]
    adj: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = self.order
        if k < 1 or k > MAX_ORDER:
            raise CapExceeded(f"tree order {k} outside [1, {MAX_ORDER}]")
        if len(self.edges) != k - 1:
            raise InvalidTree(f"{len(self.edges)} edges for {k} vertices")
        adj = _rows(k, self.edges)
        if sum(row.bit_count() for row in adj) != 2 * (k - 1):
            raise InvalidTree("repeated edge")
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            frontier = nxt & ~seen
            seen |= nxt
        if seen != (1 << k) - 1:
            raise InvalidTree("tree is disconnected")
        object.__setattr__(self, "adj", tuple(adj))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def is_leaf(self, v: int) -> bool:
        return self.adj[v].bit_count() == 1

    def leaves(self) -> list[int]:
        return [v for v in range(self.order) if self.adj[v].bit_count() == 1]

    def as_graph(self) -> Graph:
        return Graph(self.order, self.adj)

    def distances(self, source: int) -> list[int]:
        dist = [-1] * self.order
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in bits(self.adj[v]):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def parent_array(self, root: int = 0) -> list[int]:
        parent = [-2] * self.order
        parent[root] = -1
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in bits(self.adj[v]):
                if parent[w] == -2:
                    parent[w] = v
                    queue.append(w)
        return parent

    def induced(self, vertices: Sequence[int]) -> "Tree":
        """Subtree on ``vertices`` (must be connected); new ``i`` is ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = tuple(
            (index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        return Tree(len(vertices), edges)

    @classmethod
    def from_parents(cls, parents: Sequence[int]) -> "Tree":
        edges = []
        roots = 0
        for v, p in enumerate(parents):
            if p < 0:
                roots += 1
            else:
                edges.append((p, v))
        if roots != 1:
            raise InvalidTree(f"parent array has {roots} roots")
        return cls(len(parents), tuple(edges))


def path_tree(k: int) -> Tree:
    return Tree(k, tuple((i, i + 1) for i in range(k - 1)))


def star_tree(k: int) -> Tree:
    return Tree(k, tuple((0, i) for i in range(1, k)))


@dataclass(frozen=True)
class PathDecomposition:
    """A longest path ``a_0 ... a_r`` with the leaf fans at both ends.

    ``b_leaves`` are the neighbours of ``a_1`` other than ``a_2`` and
    ``c_leaves`` the neighbours of ``a_{r-1}`` other than ``a_{r-2}``.  For
    ``r <= 3`` the two ends overlap and the fields are computed literally.
    """

    path: tuple[int, ...]
    b_leaves: frozenset[int]
    c_leaves: frozenset[int]

    @property
    def r(self) -> int:
        return len(self.path) - 1

    @property
    def s(self) -> int:
        return len(self.b_leaves)

    @property
    def t(self) -> int:
        return len(self.c_leaves)

    def a(self, i: int) -> int:
        """``a_i``; negative ``i`` counts from the far end, so ``a(-2)`` is ``a_{r-1}``."""
        return self.path[i]

    def reversed(self, T: Tree) -> "PathDecomposition":
        return _decompose(T, tuple(reversed(self.path)))


def _fan(T: Tree, path: tuple[int, ...], hub: int, away: int | None) -> frozenset[int]:
    nbrs = T.adj[path[hub]]
    if away is not None:
        nbrs &= ~(1 << path[away])
    return frozenset(bits(nbrs))


def _decompose(T: Tree, path: tuple[int, ...]) -> PathDecomposition:
    r = len(path) - 1
    if r == 0:
        return PathDecomposition(path, frozenset(), frozenset())
    b = _fan(T, path, 1, 2 if r >= 2 else None)
    c = _fan(T, path, r - 1, r - 2 if r >= 2 else None)
    return PathDecomposition(path, b, c)


def longest_path_decomposition(T: Tree) -> PathDecomposition:
    """Deterministic longest path with its end fans.

    ``a_0`` is the smallest-index vertex of maximum eccentricity; among the
    longest paths leaving it, the lexicographically smallest is returned.
    """
    k = T.order
    if k == 1:
        return PathDecomposition((0,), frozenset(), frozenset())
    ecc = [max(T.distances(v)) for v in range(k)]
    diameter = max(ecc)
    start = ecc.index(diameter)
    dist = T.distances(start)
    # height[v]: deepest distance from start reachable inside the branch below v
    order = sorted(range(k), key=lambda v: -dist[v])
    height = dist[:]
    for v in order:
        for w in bits(T.adj[v]):
            if dist[w] == dist[v] - 1 and height[v] > height[w]:
                height[w] = height[v]
    path = [start]
    v = start
    while dist[v] < diameter:
        v = min(w for w in bits(T.adj[v]) if dist[w] == dist[v] + 1 and height[w] == diameter)
        path.append(v)
    return _decompose(T, tuple(path))


def tree_diameter(T: Tree) -> int:
    return longest_path_decomposition(T).r
