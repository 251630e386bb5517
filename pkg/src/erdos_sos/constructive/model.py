"""Values passed between the dispatcher, the case handlers and the executor."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence, Union

from ..embed import UNSET, PartialEmbedding
from ..graph import Graph, Tree, avedeg


@dataclass(frozen=True)
class Instance:
    G: Graph
    T: Tree

    @property
    def k(self) -> int:
        return self.T.order

    @property
    def avedeg_ok(self) -> bool:
        return avedeg(self.G) > self.k - 2

    @property
    def k_ge_n_minus_4(self) -> bool:
        return self.k >= self.G.n - 4

    @property
    def flags(self) -> tuple[bool, bool]:
        return self.avedeg_ok, self.k_ge_n_minus_4


class ExtensionContext:
    """Read-only view of the pulled-back partial embedding ``f'``.

    Script predicates are written against this: ``c.hits(x, a2)`` asks
    whether graph vertex ``x`` is adjacent to ``f'(a2)``.
    """

    def __init__(self, G: Graph, T: Tree, pe: PartialEmbedding):
        self.G = G
        self.T = T
        self.pe = pe

    def img(self, v: int) -> int:
        return self.pe.map[v]

    def hits(self, g: int, v: int) -> bool:
        h = self.pe.map[v]
        return h != UNSET and self.G.has_edge(g, h)

    def misses(self, g: int, v: int) -> bool:
        h = self.pe.map[v]
        return h != UNSET and not self.G.has_edge(g, h)

    def at(self, v: int, *gs: int) -> bool:
        return self.pe.map[v] in gs

    def used(self, g: int) -> bool:
        return g in self.pe.map

    def holder(self, g: int) -> int | None:
        return self.pe.preimage(g)


TreeRef = Union[int, Callable[[ExtensionContext], "int | None"]]


def always(_: ExtensionContext) -> bool:
    return True


@dataclass(frozen=True)
class Branch:
    """One conditional step of an extension script.

    When ``when`` holds, apply ``swaps`` (re-image embedded tree vertices),
    then ``assign`` (place removed tree vertices), complete any remaining
    removed non-leaves by a short search, and match the leaves.
    """

    label: str
    when: Callable[[ExtensionContext], bool] = always
    swaps: tuple[tuple[TreeRef, int], ...] = ()
    assign: tuple[tuple[int, int], ...] = ()


def br(label: str, when=always, assign: dict[int, int] | None = None,
       swaps: Sequence[tuple[TreeRef, int]] = ()) -> Branch:
    return Branch(label, when, tuple(swaps), tuple((assign or {}).items()))


def holder_of(g: int) -> Callable[[ExtensionContext], int | None]:
    return lambda c: c.holder(g)


@dataclass(frozen=True)
class ReductionPlan:
    label: str
    deleted_vertices: tuple[tuple[str, int], ...]
    deleted_edges: tuple[tuple[int, int], ...]
    pruned_tree: str
    removed_tree: frozenset[int]
    sub_order: int
    extension: tuple[Branch, ...]
    open_flag: bool = False
    variant: str | None = None
    via: tuple[str, ...] = ()
    note: str | None = None
    bindings: tuple[tuple[str, int], ...] = ()

    @property
    def deleted_set(self) -> frozenset[int]:
        return frozenset(v for _, v in self.deleted_vertices)


@dataclass
class Step:
    label: str
    bindings: dict[str, Any] = field(default_factory=dict)
    sub: "CaseTrace | None" = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"label": self.label}
        if self.bindings:
            out["bindings"] = self.bindings
        if self.sub is not None:
            out["sub"] = self.sub.to_json()
        return out


FINAL_LABELS = ("extend", "swap+extend", "fallback-oracle")


@dataclass
class CaseTrace:
    """Audit record of which proof branch executed.

    ``events`` collects findings (proof gaps, reduced instances that missed
    their average-degree claim, uncovered configurations, script misses),
    including those raised in nested recursive calls.
    """

    steps: list[Step] = field(default_factory=list)
    fallback: bool = False
    events: list[dict] = field(default_factory=list)

    def add(self, label: str, **bindings) -> Step:
        step = Step(label, bindings)
        self.steps.append(step)
        return step

    def event(self, kind: str, label: str | None, **data) -> None:
        self.events.append({"kind": kind, "label": label, **data})

    def labels(self) -> list[str]:
        return [s.label for s in self.steps]

    def case_labels(self) -> list[str]:
        """Every proof-case label reached here or in nested calls."""
        out = []
        for s in self.steps:
            if s.label.startswith("§"):
                out.append(s.label[1:])
            for via in s.bindings.get("via", ()):
                out.append(via)
            if s.sub is not None:
                out.extend(s.sub.case_labels())
        return out

    def all_events(self) -> list[dict]:
        out = list(self.events)
        for s in self.steps:
            if s.sub is not None:
                out.extend(s.sub.all_events())
        return out

    @property
    def final(self) -> str:
        return self.steps[-1].label

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "fallback": self.fallback,
            "events": self.events,
        }


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
