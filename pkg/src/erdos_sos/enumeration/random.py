"""Seeded random instances for the constructive engine.

Every instance is derived from ``(seed, index)`` alone: the generator for
index ``i`` is ``PCG64(SeedSequence(seed, spawn_key=(i,)))``, so workers in
any order or process layout draw identical instances.

Graphs are built in the complement ``H``.  Starting from ``K_n`` we delete
non-adjacencies at designated vertices first (a profile's motif, the hub
fixing ``Delta`` and the planted minimum-degree vertex ``z``), then lift
every vertex to the complement degree the target ``Delta`` demands, and
finally scatter further deletions while the edge budget allows.

Profiles other than ``"uniform"`` plant a motif on the low-index vertices
so that rarely sampled branches of the case analysis are exercised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator

import numpy as np

from ..constructive.model import Instance
from ..errors import EmptyRange, TargetInfeasible
from ..graph import Graph, Tree, longest_path_decomposition, tree_diameter
from .trees import prufer_decode

PROFILES = ("uniform", "x-of-degree-k-1", "split-pair", "independent-hubs", "c4-world")
MIXED_WEIGHTS = {"uniform": 0.6, "x-of-degree-k-1": 0.1, "split-pair": 0.1,
                 "independent-hubs": 0.1, "c4-world": 0.1}


def edge_threshold(k: int) -> int:
    """Fewest edges forcing ``avedeg > k-2`` on ``k+4`` vertices."""
    return 1 + (k - 2) * (k + 4) // 2


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _end_degrees(T: Tree) -> tuple[int, int]:
    dec = longest_path_decomposition(T)
    a, b = T.degree(dec.a(1)), T.degree(dec.a(-2))
    return max(a, b), min(a, b)


def random_tree(k: int, rng: np.random.Generator, min_diameter: int = 0,
                ends: str | None = None, tries: int = 5000) -> Tree:
    """Uniform labelled tree (via a uniform Prüfer code), retried until it qualifies.

    ``ends`` optionally constrains the tree degrees of ``a_1`` and
    ``a_{r-1}``: ``"2,2"`` both two, ``"3+"`` the larger at least three.
    """
    for _ in range(tries):
        if k == 1:
            return prufer_decode([], 1)
        T = prufer_decode([int(x) for x in rng.integers(0, k, size=k - 2)], k)
        if tree_diameter(T) < min_diameter:
            continue
        if ends is not None:
            hi, lo = _end_degrees(T)
            if ends == "2,2" and hi != 2 or ends == "3+" and hi < 3:
                continue
        return T
    raise EmptyRange(f"no tree of order {k} with diameter >= {min_diameter}, ends {ends}")


class _Complement:
    """Complement graph under construction.

    ``frozen`` vertices take no further non-edges; ``forbid`` pairs must
    stay edges of ``G``.
    """

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        self.rows = [0] * n
        self.forbid = [0] * n
        self.frozen = 0

    def deg(self, v: int) -> int:
        return self.rows[v].bit_count()

    def has(self, a: int, b: int) -> bool:
        return bool(self.rows[a] >> b & 1)

    def add(self, a: int, b: int) -> None:
        self.rows[a] |= 1 << b
        self.rows[b] |= 1 << a

    def ban(self, a: int, b: int) -> None:
        self.forbid[a] |= 1 << b
        self.forbid[b] |= 1 << a

    def freeze(self, *vs: int) -> None:
        for v in vs:
            self.frozen |= 1 << v

    def open(self, v: int) -> bool:
        return not self.frozen >> v & 1 and self.deg(v) < self.cap

    def can_add(self, a: int, b: int) -> bool:
        return (a != b and not self.has(a, b) and not self.forbid[a] >> b & 1
                and self.open(a) and self.open(b))

    @property
    def m(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def graph(self) -> Graph:
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~self.rows[v] & ~(1 << v) for v in range(self.n)))


class _Retry(Exception):
    pass


def _pick(rng: np.random.Generator, seq: list[int]) -> int:
    if not seq:
        raise _Retry
    return seq[int(rng.integers(len(seq)))]


def _sample(rng: np.random.Generator, seq: list[int], size: int) -> list[int]:
    if size > len(seq):
        raise _Retry
    return [seq[int(i)] for i in rng.choice(len(seq), size=size, replace=False)]


def _plant_z(H: _Complement, k: int, rng: np.random.Generator, order: list[int]) -> int:
    lo = H.n - 1 - (k - 5)
    cands = [v for v in order if H.open(v)]
    z = _pick(rng, cands)
    want = int(rng.integers(max(lo, H.deg(z)), H.cap + 1))
    pool = [w for w in order if H.can_add(z, w)]
    for w in _sample(rng, pool, max(0, want - H.deg(z))):
        H.add(z, w)
    return z


def _lift(H: _Complement, floor: int, rng: np.random.Generator, order: list[int]) -> None:
    for v in order:
        while H.deg(v) < floor:
            if H.frozen >> v & 1:
                raise _Retry
            cands = [w for w in order if H.can_add(v, w)]
            lacking = [w for w in cands if H.deg(w) < floor]
            H.add(v, _pick(rng, lacking or cands))


def _scatter(H: _Complement, extra: int, rng: np.random.Generator) -> None:
    for _ in range(4 * extra + 10):
        if extra <= 0:
            return
        a, b = (int(x) for x in rng.choice(H.n, size=2, replace=False))
        if H.can_add(a, b):
            H.add(a, b)
            extra -= 1


# Motifs.  Each plants non-edges on vertices 0.. and returns the target
# Delta offset (Delta - k) and a tree end constraint.

def _motif_uniform(H, k, rng, offset):
    return offset, None


def _motif_x_k_minus_1(H, k, rng, offset):
    """``u`` of degree k+2 whose only non-neighbour ``x`` has degree k-1."""
    u, x, ys = 0, 1, [2, 3, 4]
    H.add(u, x)
    for y in ys:
        H.add(x, y)
    H.freeze(u, x)
    for y in ys:
        want = int(rng.choice([1, 2, 3, 3, 4, 4, 5]))
        pool = [w for w in range(5, H.n) if H.can_add(y, w)]
        for w in _sample(rng, pool, want - H.deg(y)):
            H.add(y, w)
        H.freeze(y)
    return 2, str(rng.choice(["3+", "2,2"]))


def _motif_split_pair(H, k, rng, offset):
    """``u`` of degree k+1 whose non-neighbours ``x_1, x_2`` share no other neighbour."""
    u, x1, x2 = 0, 1, 2
    H.add(u, x1)
    H.add(u, x2)
    if rng.random() < 0.7:
        H.add(x1, x2)
    rest = list(range(3, H.n))
    room1 = H.cap - H.deg(x1)
    room2 = H.cap - H.deg(x2)
    if room1 + room2 < len(rest):
        raise _Retry
    for v in [int(v) for v in rng.permutation(rest)]:
        opts = [x for x, room in ((x1, H.cap - H.deg(x1)), (x2, H.cap - H.deg(x2))) if room > 0]
        H.add(_pick(rng, opts), v)
    H.freeze(u, x1, x2)
    return 1, "2,2"


def _motif_independent_hubs(H, k, rng, offset):
    """Four vertices of degree k-1, pairwise adjacent in the complement."""
    U = [0, 1, 2, 3]
    for a, b in combinations(U, 2):
        H.add(a, b)
    pattern = [[4, 5, 6, 7], [4, 4, 5, 6], [4, 4, 5, 5], [4, 5, 6, 6]]
    ys = pattern[int(rng.integers(len(pattern)))]
    for u, y in zip(U, ys):
        H.add(u, y)
    H.freeze(*U)
    return -1, "3+"


def _motif_c4_world(H, k, rng, offset):
    """Four degree k-1 vertices whose missed sets induce only 4-cycles or cliques."""
    n = H.n
    U = [0, 1, 2, 3]
    S: dict[int, list[int]] = {}
    if rng.random() < 0.25:
        # the first hub misses the other three
        S[0] = [1, 2, 3, int(rng.integers(4, n))]
    for j, u in enumerate(U):
        if u in S:
            continue
        must = [w for w in S if u in S[w]]
        banned = {w for w in S if u not in S[w]}
        seen = {x for s in S.values() for x in s}
        pool = [v for v in range(n) if v != u and v not in banned and v not in must]
        weights = np.array([4.0 if v in seen else (0.5 if v in U else 1.0) for v in pool])
        need = 4 - len(must)
        if need < 0 or need > len(pool):
            raise _Retry
        idx = rng.choice(len(pool), size=need, replace=False, p=weights / weights.sum())
        S[u] = must + [pool[int(i)] for i in idx]
    decided: dict[tuple[int, int], bool] = {}

    def decide(a, b, val):
        key = (min(a, b), max(a, b))
        if decided.get(key, val) != val:
            raise _Retry
        decided[key] = val

    for a, b in combinations(U, 2):
        decide(a, b, b in S[a])
    for u in U:
        s = S[u]
        pairs = list(combinations(sorted(s), 2))
        options = [set()]
        a, b, c, d = sorted(s)
        options += [{(a, b), (c, d)}, {(a, c), (b, d)}, {(a, d), (b, c)}]
        ok = [o for o in options
              if all(decided.get(p, p in o) == (p in o) for p in pairs)]
        if not ok:
            raise _Retry
        if rng.random() < 0.3:
            # any pattern keeping at least two edges of G inside S
            loose = [set(c) for r in range(5) for c in combinations(pairs, r)]
            loose = [o for o in loose if all(decided.get(p, p in o) == (p in o) for p in pairs)]
            ok = loose or ok
        weights = np.array([1.0 if not o else 3.0 for o in ok])
        chosen = ok[int(rng.choice(len(ok), p=weights / weights.sum()))]
        for p in pairs:
            decide(*p, p in chosen)
    for u in U:
        for x in S[u]:
            H.add(u, x)
    for (a, b), val in decided.items():
        if val:
            if not H.has(a, b):
                H.add(a, b)
        else:
            H.ban(a, b)
    if any(H.deg(v) > H.cap for v in range(n)):
        raise _Retry
    H.freeze(*U)
    return -1, "2,2"


MOTIFS: dict[str, Callable] = {
    "uniform": _motif_uniform,
    "x-of-degree-k-1": _motif_x_k_minus_1,
    "split-pair": _motif_split_pair,
    "independent-hubs": _motif_independent_hubs,
    "c4-world": _motif_c4_world,
}


def _build(n: int, k: int, rng: np.random.Generator, delta_target: int | None,
           plant_z: bool, density: float | None, profile: str) -> tuple[Graph, str | None]:
    budget = n * (n - 1) // 2 - edge_threshold(k)
    cap = n - 1 - k // 2  # complement degree ceiling keeping delta >= k//2
    targets = list(range(k - 1, k + 4)) if delta_target is None else [delta_target]
    feasible = []
    for t in targets:
        floor = n - 1 - t
        need = n * floor + (max(0, (n - 1 - (k - 5)) - floor) if plant_z else 0)
        if 0 <= floor <= cap and (need + 1) // 2 <= budget:
            feasible.append(t)
    if not feasible:
        raise TargetInfeasible(f"Δ target {delta_target} infeasible for k={k}")
    target = feasible[int(rng.integers(len(feasible)))]
    motif = MOTIFS[profile]
    for _ in range(500):
        H = _Complement(n, cap)
        try:
            offset, ends = motif(H, k, rng, target - k)
            if delta_target is not None and k + offset != delta_target:
                raise TargetInfeasible(f"profile {profile} fixes Δ=k{offset:+d}")
            floor = n - 1 - (k + offset)
            order = [int(v) for v in rng.permutation(n)]
            if profile == "uniform":
                hub = order[-1]
                if floor == 0:
                    H.freeze(hub)
                if plant_z:
                    _plant_z(H, k, rng, order)
                _lift(H, floor, rng, [hub])
                H.freeze(hub)
                _lift(H, floor, rng, order)
            else:
                if plant_z:
                    _plant_z(H, k, rng, order)
                _lift(H, floor, rng, order)
        except _Retry:
            continue
        if H.m > budget:
            continue
        frac = float(rng.random()) if density is None else density
        _scatter(H, int(round(frac * (budget - H.m))), rng)
        G = H.graph()
        degs = G.degrees()
        if max(degs) != k + offset or min(degs) < k // 2 or (plant_z and min(degs) > k - 5):
            continue
        assert G.m >= edge_threshold(k)
        return G, ends
    raise TargetInfeasible(f"could not realise profile {profile} at Δ={target} for k={k}")


def random_graph(n: int, k: int, rng: np.random.Generator, delta_target: int | None = None,
                 plant_z: bool = True, density: float | None = None,
                 profile: str = "uniform") -> Graph:
    """Graph on ``n = k+4`` vertices with at least the threshold edge count and ``delta >= k//2``.

    ``delta_target`` fixes the maximum degree.  With ``plant_z`` some vertex
    has degree at most ``k-5``.  ``density`` in [0, 1] scales how much of
    the spare complement budget is spent on extra non-edges.
    """
    if n != k + 4:
        raise TargetInfeasible("random instances are generated for n = k+4")
    return _build(n, k, rng, delta_target, plant_z, density, profile)[0]


def random_instance(n: int, k: int, seed: int, index: int, delta_target: int | None = None,
                    plant_z: bool = True, density: float | None = None,
                    profile: str = "uniform") -> Instance:
    """Reproducible instance number ``index`` of the stream with master ``seed``.

    ``profile="mixed"`` draws the profile itself from the substream;
    ``"balanced"`` does the same with equal weights.
    """
    if n != k + 4:
        raise TargetInfeasible("random instances are generated for n = k+4")
    rng = substream(seed, index)
    if profile in ("mixed", "balanced"):
        weights = MIXED_WEIGHTS if profile == "mixed" else dict.fromkeys(PROFILES, 1.0)
        names = list(weights)
        p = np.array(list(weights.values()))
        profile = names[int(rng.choice(len(names), p=p / p.sum()))]
        if delta_target is not None and profile != "uniform":
            profile = "uniform"
    if profile not in MOTIFS:
        raise ValueError(f"unknown profile {profile!r}")
    G, ends = _build(n, k, rng, delta_target, plant_z, density, profile)
    T = random_tree(k, rng, min_diameter=5, ends=ends)
    return Instance(G, T)


@dataclass
class InstanceStream:
    """Reproducible instance supply.

    ``mode="random"`` yields ``random_instance(n, k, seed, i)`` for ``i`` in
    ``[start, stop)``.  ``mode="exhaustive"`` yields every pair of a graph
    class on ``n`` vertices (with at least ``min_edges`` edges) and a free
    tree of order ``k``, in a fixed order, sharded by index range.
    """

    n: int
    k: int
    mode: str = "random"
    seed: int = 0
    count: int = 0
    delta_target: int | None = None
    profile: str = "uniform"
    min_edges: int = 0
    start: int = 0
    stop: int | None = None
    _cursor: int = field(default=0, init=False, repr=False)

    def __iter__(self) -> Iterator[tuple[int, Instance]]:
        stop = self.count if self.stop is None else min(self.stop, self.count or self.stop)
        if self.mode == "random":
            for i in range(self.start, stop):
                yield i, random_instance(self.n, self.k, self.seed, i, self.delta_target,
                                         profile=self.profile)
        elif self.mode == "exhaustive":
            from .graphs import all_graphs_upto_iso
            from .trees import all_free_trees

            trees = list(all_free_trees(self.k))
            i = 0
            for G in all_graphs_upto_iso(self.n, self.min_edges):
                for T in trees:
                    if self.start <= i and (self.stop is None or i < self.stop):
                        yield i, Instance(G, T)
                    i += 1
        else:
            raise ValueError(f"unknown mode {self.mode!r}")
