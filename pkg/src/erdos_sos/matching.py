"""Maximum bipartite matching on bitset candidate lists.

Left vertices are positions in ``candidates``; right vertices are bit
positions.  The instances here have at most a few dozen vertices per side, so
plain augmenting paths (Kuhn) beat Hopcroft-Karp's bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import bits


@dataclass(frozen=True)
class MatchResult:
    assignment: tuple[int, ...] | None
    # set when assignment is None: left indices whose joint neighbourhood is too small
    violator: frozenset[int] = frozenset()
    neighbourhood: int = 0


def bipartite_match(candidates: list[int]) -> MatchResult:
    """Saturate every left vertex or return a Hall violator."""
    owner: dict[int, int] = {}
    match = [-1] * len(candidates)

    def augment(i: int, seen: list[int]) -> bool:
        avail = candidates[i] & ~seen[0]
        for x in bits(avail):
            seen[0] |= 1 << x
            j = owner.get(x)
            if j is None or augment(j, seen):
                owner[x] = i
                match[i] = x
                return True
        return False

    # most constrained first keeps augmenting paths short
    order = sorted(range(len(candidates)), key=lambda i: (candidates[i].bit_count(), i))
    for i in order:
        seen = [0]
        if not augment(i, seen):
            # alternating tree from i: left side = i plus owners of visited right vertices
            left = {i} | {owner[x] for x in bits(seen[0])}
            nbhd = 0
            for j in left:
                nbhd |= candidates[j]
            return MatchResult(None, frozenset(left), nbhd)
    return MatchResult(tuple(match))
