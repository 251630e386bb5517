"""Free trees up to isomorphism, Prüfer codes, and parent-array I/O."""

from __future__ import annotations

import heapq
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, TextIO

from ..errors import CapExceeded, InvalidTree, ParseError
from ..graph import Tree, bits

MAX_TREE_ORDER = 12


def tree_centers(T: Tree) -> list[int]:
    degree = [T.degree(v) for v in range(T.order)]
    layer = [v for v in range(T.order) if degree[v] <= 1]
    remaining = T.order
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for w in bits(T.adj[v]):
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(T: Tree, v: int, parent: int) -> str:
    kids = sorted(_rooted_code(T, w, v) for w in bits(T.adj[v]) if w != parent)
    return "(" + "".join(kids) + ")"


def tree_code(T: Tree) -> str:
    """Isomorphism-invariant string: the largest rooted code over the centres."""
    return max(_rooted_code(T, c, -1) for c in tree_centers(T))


def _from_code(code: str) -> Tree:
    edges = []
    stack: list[int] = []
    count = 0
    for ch in code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], count))
            stack.append(count)
            count += 1
        else:
            stack.pop()
    return Tree(count, tuple(edges))


def canonical_tree(T: Tree) -> Tree:
    """Canonical representative, labelled in preorder of its code."""
    return _from_code(tree_code(T))


@lru_cache(maxsize=None)
def _trees(k: int) -> tuple[Tree, ...]:
    if k == 1:
        return (Tree(1, ()),)
    seen: dict[str, Tree] = {}
    for T in _trees(k - 1):
        for v in range(k - 1):
            grown = Tree(k, T.edges + ((v, k - 1),))
            code = tree_code(grown)
            if code not in seen:
                seen[code] = _from_code(code)
    return tuple(seen[c] for c in sorted(seen))


def all_free_trees(k: int) -> Iterator[Tree]:
    """Every free tree of order ``k`` exactly once, in canonical form.

    Grown by attaching a leaf to every vertex of every tree of order k-1
    and deduplicating on the centre-rooted code.
    """
    if not 1 <= k <= MAX_TREE_ORDER:
        raise CapExceeded(f"tree order {k} outside [1, {MAX_TREE_ORDER}]")
    return iter(_trees(k))


def prufer_decode(seq: Sequence[int], k: int | None = None) -> Tree:
    """Labelled tree on ``k = len(seq) + 2`` vertices with Prüfer code ``seq``."""
    if k is None:
        k = len(seq) + 2
    if k == 1:
        return Tree(1, ())
    if len(seq) != k - 2:
        raise InvalidTree("Prüfer code length must be order - 2")
    degree = [1] * k
    for x in seq:
        degree[x] += 1
    heap = [v for v in range(k) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for x in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(heap, x)
    u, v = heapq.heappop(heap), heapq.heappop(heap)
    edges.append((u, v))
    return Tree(k, tuple(edges))


def prufer_encode(T: Tree) -> list[int]:
    k = T.order
    adj = list(T.adj)
    degree = [T.degree(v) for v in range(k)]
    heap = [v for v in range(k) if degree[v] == 1]
    heapq.heapify(heap)
    out = []
    for _ in range(k - 2):
        leaf = heapq.heappop(heap)
        nb = adj[leaf].bit_length() - 1
        out.append(nb)
        adj[nb] &= ~(1 << leaf)
        degree[nb] -= 1
        if degree[nb] == 1:
            heapq.heappush(heap, nb)
    return out


def format_parents(T: Tree, root: int = 0) -> str:
    return " ".join(str(p) for p in T.parent_array(root))


def parse_parents(line: str, lineno: int | None = None) -> Tree:
    parents = []
    col = 1
    for tok in line.split():
        try:
            parents.append(int(tok))
        except ValueError:
            raise ParseError(f"not an integer: {tok!r}", lineno, col) from None
        col += len(tok) + 1
    if not parents:
        raise ParseError("empty tree line", lineno, 1)
    k = len(parents)
    for i, p in enumerate(parents):
        if p != -1 and not 0 <= p < k:
            raise ParseError(f"parent {p} of vertex {i} out of range", lineno)
    try:
        return Tree.from_parents(parents)
    except InvalidTree as exc:
        raise ParseError(str(exc), lineno) from None


def read_trees(lines: Iterable[str]) -> list[Tree]:
    return [parse_parents(raw, i) for i, raw in enumerate(lines, start=1) if raw.strip()]


def write_trees(trees: Iterable[Tree], handle: TextIO) -> None:
    for T in trees:
        handle.write(format_parents(T) + "\n")
