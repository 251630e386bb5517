"""Independent count oracles for the enumerators.

Both avoid the machinery they check: trees are deduplicated by the
minimum rooted code over every root (not the centre), graphs by the
minimum edge mask over every vertex permutation (not refinement).
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement, permutations

import numpy as np

from ..errors import CapExceeded
from ..graph import Tree
from .trees import prufer_decode

MAX_TREE_ORACLE = 12
MAX_GRAPH_ORACLE = 7


def _rooted(T: Tree, v: int, parent: int) -> str:
    return "(" + "".join(sorted(_rooted(T, w, v) for w in T.neighbors(v) if w != parent)) + ")"


def all_roots_code(T: Tree) -> str:
    """Isomorphism invariant that is also complete: min over all roots."""
    return min(_rooted(T, v, -1) for v in range(T.order))


def sorted_prufer_codes(k: int):
    """Non-decreasing Prüfer codes of length ``k-2``.

    They reach every free tree: label a tree in reverse breadth-first
    order from a root. Each vertex is then a leaf when its turn comes,
    and breadth-first parents are non-decreasing, so the recorded code is
    sorted.
    """
    if k <= 2:
        yield ()
        return
    yield from combinations_with_replacement(range(k), k - 2)


def free_tree_count_prufer(k: int) -> int:
    if not 1 <= k <= MAX_TREE_ORACLE:
        raise CapExceeded(f"tree oracle order {k} outside [1, {MAX_TREE_ORACLE}]")
    return len({all_roots_code(prufer_decode(list(code), k)) for code in sorted_prufer_codes(k)})


def graph_class_count_bruteforce(n: int, min_edges: int = 0) -> int:
    """Classes on ``n`` vertices with at least ``min_edges`` edges.

    Every edge subset is mapped to its minimum mask over all ``n!``
    relabellings, vectorised over subsets.
    """
    if not 1 <= n <= MAX_GRAPH_ORACLE:
        raise CapExceeded(f"graph oracle order {n} outside [1, {MAX_GRAPH_ORACLE}]")
    pairs = list(combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    m = len(pairs)
    masks = np.arange(1 << m, dtype=np.int64)
    bitmat = (masks[:, None] >> np.arange(m, dtype=np.int64)) & 1
    best = masks.copy()
    for perm in permutations(range(n)):
        weights = np.array(
            [1 << index[tuple(sorted((perm[a], perm[b])))] for a, b in pairs], dtype=np.int64
        )
        np.minimum(best, bitmat @ weights, out=best)
    keep = bitmat.sum(axis=1) >= min_edges
    return int(np.unique(best[keep]).size)
