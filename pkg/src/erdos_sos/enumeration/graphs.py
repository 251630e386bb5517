"""Graphs up to isomorphism by vertex augmentation plus canonical dedup."""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from ..errors import CapExceeded
from ..graph import Graph
from .canonical import canonical_labeling

MAX_ENUM_ORDER = 9


@lru_cache(maxsize=None)
def _classes(n: int) -> tuple[Graph, ...]:
    if n == 1:
        return (Graph(1, (0,)),)
    found: dict[tuple[int, ...], None] = {}
    for P in _classes(n - 1):
        base = list(P.adj) + [0]
        for nbhd in range(1 << (n - 1)):
            rows = base[:]
            rows[n - 1] = nbhd
            for v in range(n - 1):
                if nbhd >> v & 1:
                    rows[v] |= 1 << (n - 1)
            cert, _ = canonical_labeling(Graph(n, tuple(rows)))
            found.setdefault(cert, None)
    return tuple(Graph(n, cert) for cert in sorted(found))


def all_graphs_upto_iso(n: int, min_edges: int = 0) -> Iterator[Graph]:
    """One canonical representative per isomorphism class with ``m >= min_edges``."""
    if not 1 <= n <= MAX_ENUM_ORDER:
        raise CapExceeded(f"graph order {n} outside [1, {MAX_ENUM_ORDER}]")
    return (G for G in _classes(n) if G.m >= min_edges)
