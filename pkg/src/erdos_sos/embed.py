"""Tree embeddings: complete backtracking search, validation, and the two
extension moves used when completing a partial embedding.

An embedding is stored as a tuple indexed by tree vertex.  A partial
embedding uses ``-1`` for tree vertices that are not yet placed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainMismatch, HallViolation, NotAdjacent
from .graph import Graph, Tree, bits, longest_path_decomposition
from .matching import bipartite_match

UNSET = -1


@dataclass(frozen=True)
class Embedding:
    map: tuple[int, ...]

    def __getitem__(self, v: int) -> int:
        return self.map[v]

    def __len__(self):
        return len(self.map)


@dataclass(frozen=True)
class PartialEmbedding:
    """Injective, edge-preserving map from some tree vertices into ``G``."""

    n: int
    map: tuple[int, ...]

    @classmethod
    def empty(cls, k: int, n: int) -> "PartialEmbedding":
        return cls(n, (UNSET,) * k)

    @classmethod
    def from_dict(cls, k: int, n: int, mapping: dict[int, int]) -> "PartialEmbedding":
        m = [UNSET] * k
        for tv, gv in mapping.items():
            m[tv] = gv
        return cls(n, tuple(m))

    @property
    def used(self) -> int:
        mask = 0
        for g in self.map:
            if g != UNSET:
                mask |= 1 << g
        return mask

    @property
    def frontier(self) -> int:
        """Bitset of graph vertices not in the image."""
        return ((1 << self.n) - 1) & ~self.used

    def domain(self) -> list[int]:
        return [v for v, g in enumerate(self.map) if g != UNSET]

    def preimage(self, g: int) -> int | None:
        try:
            return self.map.index(g)
        except ValueError:
            return None

    def is_total(self) -> bool:
        return UNSET not in self.map

    def assign(self, T: Tree, G: Graph, v: int, g: int) -> "PartialEmbedding":
        """Place unembedded ``v`` on frontier vertex ``g``."""
        if self.map[v] != UNSET:
            raise NotAdjacent(f"tree vertex {v} is already embedded")
        if not self.frontier >> g & 1:
            raise NotAdjacent(f"graph vertex {g} is already used")
        for w in bits(T.adj[v]):
            h = self.map[w]
            if h != UNSET and not G.adj[g] >> h & 1:
                raise NotAdjacent(f"{g} misses {h}, the image of tree neighbour {w}")
        m = list(self.map)
        m[v] = g
        return PartialEmbedding(self.n, tuple(m))

    def total(self) -> Embedding:
        if not self.is_total():
            raise DomainMismatch("partial embedding is not total")
        return Embedding(self.map)


def validate_embedding(T: Tree, G: Graph, mapping: Sequence[int]) -> tuple[bool, str | None]:
    """Check injectivity and edge preservation.

    Returns ``(True, None)`` or ``(False, description of the first violation)``.
    """
    if len(mapping) != T.order or any(g is None or g == UNSET for g in mapping):
        raise DomainMismatch(f"map covers {len(mapping)} entries for a tree of order {T.order}")
    owner: dict[int, int] = {}
    for v, g in enumerate(mapping):
        if not 0 <= g < G.n:
            return False, f"vertex {v} maps outside the graph ({g})"
        if g in owner:
            return False, f"collision: tree vertices {owner[g]} and {v} both map to {g}"
        owner[g] = v
    for u, v in T.edges:
        if not G.adj[mapping[u]] >> mapping[v] & 1:
            return False, f"tree edge ({u}, {v}) maps to non-edge ({mapping[u]}, {mapping[v]})"
    return True, None


def extend_leaves(
    pe: PartialEmbedding, T: Tree, G: Graph, pending: Sequence[tuple[int, int]]
) -> Embedding:
    """Place each pending ``(leaf, anchor)`` on a distinct frontier neighbour
    of the anchor's image, by maximum bipartite matching.

    Raises :class:`HallViolation` carrying the obstructing leaf set.
    """
    leaves = [leaf for leaf, _ in pending]
    if len(set(leaves)) != len(leaves):
        raise DomainMismatch("a pending leaf is listed twice")
    if sorted(leaves) != [v for v, g in enumerate(pe.map) if g == UNSET]:
        raise DomainMismatch("pending leaves must be exactly the unembedded vertices")
    frontier = pe.frontier
    cands = []
    for leaf, anchor in pending:
        if not T.adj[leaf] >> anchor & 1:
            raise DomainMismatch(f"{anchor} is not adjacent to {leaf} in the tree")
        if T.degree(leaf) != 1 and T.order > 2:
            raise DomainMismatch(f"pending vertex {leaf} is not a leaf")
        image = pe.map[anchor]
        if image == UNSET:
            raise DomainMismatch(f"anchor {anchor} is not embedded")
        cands.append(G.adj[image] & frontier)
    result = bipartite_match(cands)
    if result.assignment is None:
        raise HallViolation((leaves[i] for i in result.violator), bits(result.neighbourhood))
    m = list(pe.map)
    for (leaf, _), g in zip(pending, result.assignment):
        m[leaf] = g
    return Embedding(tuple(m))


def pending_leaves(pe: PartialEmbedding, T: Tree) -> list[tuple[int, int]] | None:
    """Pair every unembedded vertex with its embedded neighbour.

    Returns ``None`` if some unembedded vertex is not a leaf hanging off an
    embedded vertex.
    """
    out = []
    for v, g in enumerate(pe.map):
        if g != UNSET:
            continue
        if T.order > 2 and T.degree(v) != 1:
            return None
        anchor = next((w for w in bits(T.adj[v]) if pe.map[w] != UNSET), None)
        if anchor is None:
            return None
        out.append((v, anchor))
    return out


def swap_image(pe: PartialEmbedding, T: Tree, G: Graph, w: int, u: int) -> PartialEmbedding:
    """Move embedded ``w`` onto frontier vertex ``u``; its old image is freed."""
    if pe.map[w] == UNSET:
        raise NotAdjacent(f"tree vertex {w} is not embedded")
    if not pe.frontier >> u & 1:
        raise NotAdjacent(f"graph vertex {u} is not in the frontier")
    for x in bits(T.adj[w]):
        h = pe.map[x]
        if h != UNSET and not G.adj[u] >> h & 1:
            raise NotAdjacent(f"{u} misses {h}, the image of tree neighbour {x} of {w}")
    m = list(pe.map)
    m[w] = u
    return PartialEmbedding(pe.n, tuple(m))


def _search_order(T: Tree) -> tuple[list[int], list[int], list[int]]:
    """Core vertices in DFS preorder from ``a_1`` with their parents, and the leaves.

    Children are visited highest tree degree first.
    """
    k = T.order
    dec = longest_path_decomposition(T)
    root = dec.a(1)
    core_mask = 0
    for v in range(k):
        if T.degree(v) > 1:
            core_mask |= 1 << v
    core_mask |= 1 << root
    order: list[int] = []
    parent: list[int] = []
    stack = [(root, -1)]
    while stack:
        v, p = stack.pop()
        order.append(v)
        parent.append(p)
        kids = [w for w in bits(T.adj[v] & core_mask) if w != p]
        kids.sort(key=lambda w: (T.degree(w), -w))
        stack.extend((w, v) for w in kids)
    leaves = [v for v in range(k) if not core_mask >> v & 1]
    return order, parent, leaves


def embed_backtracking(T: Tree, G: Graph) -> Embedding | None:
    """Complete search for an embedding of ``T`` into ``G``.

    Non-leaf vertices are placed by backtracking, graph candidates tried in
    descending degree; the leaves are then placed by bipartite matching,
    which is exact once their anchors are fixed.
    """
    k, n = T.order, G.n
    if k > n:
        return None
    deg = G.degrees()
    if k == 1:
        return Embedding((max(range(n), key=lambda x: (deg[x], -x)),))
    if max(deg) < max(T.degree(v) for v in range(k)):
        return None
    order, parent, leaves = _search_order(T)
    index = {v: i for i, v in enumerate(order)}
    tdeg = [T.degree(v) for v in range(k)]
    rank = sorted(range(n), key=lambda x: (-deg[x], x))
    leaf_anchor = [(leaf, next(iter(bits(T.adj[leaf])))) for leaf in leaves]
    # open_count[v]: tree neighbours of v not yet placed
    open_count = tdeg[:]
    image = [UNSET] * k
    placed: list[int] = []

    def feasible(free: int) -> bool:
        for v in placed:
            if open_count[v] and (G.adj[image[v]] & free).bit_count() < open_count[v]:
                return False
        return True

    def finish(free: int) -> Embedding | None:
        cands = [G.adj[image[a]] & free for _, a in leaf_anchor]
        res = bipartite_match(cands)
        if res.assignment is None:
            return None
        m = image[:]
        for (leaf, _), g in zip(leaf_anchor, res.assignment):
            m[leaf] = g
        return Embedding(tuple(m))

    def place(i: int, free: int) -> Embedding | None:
        if i == len(order):
            return finish(free)
        v = order[i]
        p = parent[i]
        pool = free if p < 0 else G.adj[image[p]] & free
        need = tdeg[v]
        for x in rank:
            if not pool >> x & 1 or deg[x] < need:
                continue
            image[v] = x
            placed.append(v)
            for w in bits(T.adj[v]):
                open_count[w] -= 1
            nfree = free & ~(1 << x)
            if feasible(nfree):
                found = place(i + 1, nfree)
                if found is not None:
                    return found
            for w in bits(T.adj[v]):
                open_count[w] += 1
            placed.pop()
            image[v] = UNSET
        return None

    return place(0, (1 << n) - 1)


def contains_path(G: Graph, k: int) -> bool:
    """True iff ``G`` has a path on ``k`` vertices."""
    if k < 1:
        raise ValueError("path order must be positive")
    if k > G.n:
        return False
    if k == 1:
        return True
    adj = G.adj

    def extend(end: int, used: int, length: int) -> bool:
        if length == k:
            return True
        for w in bits(adj[end] & ~used):
            if extend(w, used | (1 << w), length + 1):
                return True
        return False

    return any(extend(v, 1 << v, 1) for v in range(G.n))
