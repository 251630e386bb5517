"""Canonical labelling for small graphs.

Colour refinement to an equitable ordered partition, then individualisation
of vertices in the first smallest non-trivial cell.  Branches are pruned by
twin classes and by orbits of the automorphisms found so far that fix the
current individualised prefix.  Adequate for the orders enumerated here
(n <= 10); no attempt is made to scale further.
"""

from __future__ import annotations

from ..graph import Graph, bits


def _refine(adj: tuple[int, ...], cells: list[int]) -> list[int]:
    changed = True
    while changed:
        changed = False
        for w in list(cells):
            out = []
            for c in cells:
                if c & (c - 1) == 0:
                    out.append(c)
                    continue
                groups: dict[int, int] = {}
                for v in bits(c):
                    key = (adj[v] & w).bit_count()
                    groups[key] = groups.get(key, 0) | (1 << v)
                if len(groups) == 1:
                    out.append(c)
                else:
                    out.extend(groups[key] for key in sorted(groups))
                    changed = True
            cells = out
            if changed:
                break
    return cells


def _certificate(adj: tuple[int, ...], perm: list[int]) -> tuple[int, ...]:
    pos = [0] * len(perm)
    for i, v in enumerate(perm):
        pos[v] = i
    rows = []
    for v in perm:
        row = 0
        for w in bits(adj[v]):
            row |= 1 << pos[w]
        rows.append(row)
    return tuple(rows)


def _orbit_roots(autos: list[list[int]], n: int) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in autos:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


class _Search:
    def __init__(self, G: Graph):
        self.adj = G.adj
        self.n = G.n
        self.best: tuple[int, ...] | None = None
        self.best_perm: list[int] | None = None
        self.autos: list[list[int]] = []

    def leaf(self, perm: list[int]):
        cert = _certificate(self.adj, perm)
        if self.best is None or cert > self.best:
            self.best, self.best_perm = cert, perm
        elif cert == self.best:
            g = [0] * self.n
            for a, b in zip(self.best_perm, perm):
                g[a] = b
            self.autos.append(g)

    def run(self, cells: list[int], prefix: list[int]):
        cells = _refine(self.adj, cells)
        if all(c & (c - 1) == 0 for c in cells):
            self.leaf([c.bit_length() - 1 for c in cells])
            return
        size = min(c.bit_count() for c in cells if c & (c - 1))
        at = next(i for i, c in enumerate(cells) if c.bit_count() == size)
        target = cells[at]
        adj = self.adj
        done: list[int] = []
        for v in bits(target):
            if any((adj[v] & ~(1 << d)) == (adj[d] & ~(1 << v)) for d in done):
                continue
            if done:
                fixing = [g for g in self.autos if all(g[x] == x for x in prefix)]
                if fixing:
                    roots = _orbit_roots(fixing, self.n)
                    if any(roots[v] == roots[d] for d in done):
                        continue
            done.append(v)
            child = cells[:at] + [1 << v, target & ~(1 << v)] + cells[at + 1:]
            self.run(child, prefix + [v])


def canonical_labeling(G: Graph) -> tuple[tuple[int, ...], list[int]]:
    """Return ``(certificate, perm)``; ``perm[i]`` is the vertex placed at ``i``.

    Two graphs are isomorphic iff their certificates are equal.
    """
    s = _Search(G)
    s.run([(1 << G.n) - 1], [])
    return s.best, s.best_perm


def canonical_form(G: Graph) -> tuple[int, tuple[int, ...]]:
    return G.n, canonical_labeling(G)[0]


def canonical_graph(G: Graph) -> Graph:
    cert, _ = canonical_labeling(G)
    return Graph(G.n, cert)
