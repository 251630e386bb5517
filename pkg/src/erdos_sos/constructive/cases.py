"""Case handlers for the five maximum-degree regimes.

Each handler inspects the bound vertices, decides the subcase, and returns
a :class:`ReductionPlan`: which graph vertices and edges to delete, which
end of the tree to prune, and the extension script that rebuilds an
embedding of ``T`` from one of ``T'`` in ``G'``.

Conventions shared by every handler:

* the longest path ``a_0 .. a_r`` is oriented so that ``d_T(a_1) >= d_T(a_{r-1})``;
* when several vertices satisfy a guard the smallest index is bound;
* the reduced order defaults to ``n' - 4``; plans that claim more set it
  explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import PreconditionMismatch
from ..graph import Graph, PathDecomposition, Tree
from .model import Branch, ExtensionContext, ReductionPlan, always, br, holder_of


class Uncovered(Exception):
    """No subcase guard matched; the configuration falls outside the case analysis."""

    def __init__(self, label: str, detail: str):
        super().__init__(f"{label}: {detail}")
        self.label = label
        self.detail = detail


@dataclass(frozen=True)
class CaseInfo:
    label: str
    open_flag: bool = False
    mirror: str | None = None
    easy_rest: bool = False  # remaining configurations are left to a short search


_INFO: list[CaseInfo] = [
    CaseInfo("2.1"),
    CaseInfo("2.2.1"),
    CaseInfo("2.2.2(A)"),
    CaseInfo("2.2.2(B.1)", mirror="2.2.2(A)"),
    CaseInfo("2.2.2(B.2)(a)"),
    CaseInfo("2.2.2(B.2)(b)"),
    CaseInfo("2.2.2(B.2)(c)", mirror="2.2.2(B.2)(b)"),
    CaseInfo("2.2.2(B.2)(d)", mirror="2.2.2(A)"),
    CaseInfo("2.2.2(B.2)(e.1)"),
    CaseInfo("2.2.2(B.2)(e.2)", open_flag=True),
    CaseInfo("2.3.1(A.1)"),
    CaseInfo("2.3.1(A.2)(a)"),
    CaseInfo("2.3.1(A.2)(b)", mirror="2.3.1(A.2)(a)"),
    CaseInfo("2.3.1(B.1)"),
    CaseInfo("2.3.1(B.2)(a)"),
    CaseInfo("2.3.1(B.2)(b)", mirror="2.3.1(B.2)(a)"),
    CaseInfo("2.3.2(A)"),
    CaseInfo("2.3.2(B)"),
    CaseInfo("2.3.2(C)"),
    CaseInfo("2.3.2(D)", mirror="2.3.2(C)"),
    CaseInfo("2.4.1"),
    CaseInfo("2.4.2(A.1)"),
    CaseInfo("2.4.2(A.2)"),
    CaseInfo("2.4.2(A.3)", mirror="2.4.2(A.2)"),
    CaseInfo("2.4.2(A.4)"),
    CaseInfo("2.4.2(B)", open_flag=True, mirror="2.4.2(A.4)"),
    CaseInfo("2.4.3(A)"),
    CaseInfo("2.4.3(B)(a)"),
    CaseInfo("2.4.3(B)(b)"),
    CaseInfo("2.4.3(B)(c)"),
    CaseInfo("2.4.3(B)(d)", mirror="2.4.2(A.4)"),
    CaseInfo("2.4.4(A)", mirror="2.4.3(A)"),
    CaseInfo("2.4.4(B)", mirror="2.4.3(B)(a)"),
    CaseInfo("2.5(pre)", mirror="2.4.1"),
    CaseInfo("2.5.1(A)"),
    CaseInfo("2.5.1(B.1)"),
    CaseInfo("2.5.1(B.2)(a)"),
    CaseInfo("2.5.1(B.2)(b)"),
    CaseInfo("2.5.2(A)"),
    CaseInfo("2.5.2(A.1)", easy_rest=True),
    CaseInfo("2.5.2(A.2)", easy_rest=True),
    CaseInfo("2.5.2(B.1)", easy_rest=True),
    CaseInfo("2.5.2(B.2)(a.1)", easy_rest=True),
    CaseInfo("2.5.2(B.2)(a.2)"),
    CaseInfo("2.5.2(B.2)(a.3)(i)", easy_rest=True),
    CaseInfo("2.5.2(B.2)(a.3)(ii)", easy_rest=True),
    CaseInfo("2.5.2(B.2)(b)", easy_rest=True),
    CaseInfo("2.5.2(B.2)(c)", mirror="2.5.2(B.2)(b)"),
    CaseInfo("2.5.2(C)", mirror="2.5.2(B.1)"),
    CaseInfo("2.5.2(D)", open_flag=True, mirror="2.5.2(B.1)"),
]

REGISTRY: dict[str, CaseInfo] = {info.label: info for info in _INFO}
TOP_LEVEL = ("2.1", "2.2", "2.3", "2.4", "2.5")


def top_level(label: str) -> str:
    return label[:3]


# Pruned-tree recipes, by name.
MINUS_A1_BRANCH = "minus a_1-branch"
MINUS_BOTH = "minus both end branches"
MINUS_A1_BRANCH_AR = "minus a_1-branch and a_r"
MINUS_A0A1 = "minus {a_0,a_1}"
MINUS_A0 = "minus {a_0}"
MINUS_A0A1AR = "minus {a_0,a_1,a_r}"
MINUS_ENDS = "minus {a_0,a_1,a_{r-1},a_r}"
MINUS_AR1AR = "minus {a_{r-1},a_r}"


class CaseEnv:
    """Bound quantities shared by the handlers of one instance."""

    def __init__(self, G: Graph, T: Tree, dec: PathDecomposition, z: int):
        self.G = G
        self.T = T
        self.dec = dec
        self.z = z
        self.k = T.order
        self.n = G.n
        self.deg = G.degrees()
        p = dec.path
        self.a0, self.a1, self.a2 = p[0], p[1], p[2]
        self.ar, self.ar1, self.ar2 = p[-1], p[-2], p[-3]
        self.dT1 = T.degree(self.a1)
        self.dTr1 = T.degree(self.ar1)

    # graph helpers
    def hits(self, a: int, b: int) -> bool:
        return self.G.has_edge(a, b)

    def nn(self, v: int) -> list[int]:
        """Non-neighbours of ``v`` other than ``v``, ascending."""
        row = self.G.adj[v] | (1 << v)
        return [w for w in range(self.n) if not row >> w & 1]

    def edges_in(self, S: Sequence[int]) -> list[tuple[int, int]]:
        S = sorted(S)
        return [(a, b) for i, a in enumerate(S) for b in S[i + 1:] if self.G.has_edge(a, b)]

    def of_degree(self, d: int) -> list[int]:
        return [v for v in range(self.n) if self.deg[v] == d]

    def removed(self, recipe: str) -> frozenset[int]:
        d = self.dec
        a1_branch = {self.a1} | d.b_leaves
        ar1_branch = {self.ar1} | d.c_leaves
        table = {
            MINUS_A1_BRANCH: a1_branch,
            MINUS_BOTH: a1_branch | ar1_branch,
            MINUS_A1_BRANCH_AR: a1_branch | {self.ar},
            MINUS_A0A1: {self.a0, self.a1},
            MINUS_A0: {self.a0},
            MINUS_A0A1AR: {self.a0, self.a1, self.ar},
            MINUS_ENDS: {self.a0, self.a1, self.ar1, self.ar},
            MINUS_AR1AR: {self.ar1, self.ar},
        }
        return frozenset(table[recipe])

    def plan(self, label: str, roles: Sequence[tuple[str, int]], recipe: str,
             script: Sequence[Branch], edges: Sequence[tuple[int, int]] = (),
             sub_order: int | None = None, variant: str | None = None,
             via: Sequence[str] = (), note: str | None = None,
             bindings: dict[str, int] | None = None) -> ReductionPlan:
        info = REGISTRY[label]
        verts = [v for _, v in roles]
        if len(set(verts)) != len(verts):
            raise PreconditionMismatch(f"{label}: roles {roles} do not bind distinct vertices")
        D = set(verts)
        kept_edges = []
        for a, b in edges:
            if a in D or b in D:
                continue
            if not self.G.has_edge(a, b):
                raise PreconditionMismatch(f"{label}: edge ({a}, {b}) to delete is absent")
            kept_edges.append((min(a, b), max(a, b)))
        if sub_order is None:
            sub_order = self.k - len(D)
        return ReductionPlan(
            label=label,
            deleted_vertices=tuple(roles),
            deleted_edges=tuple(sorted(set(kept_edges))),
            pruned_tree=recipe,
            removed_tree=self.removed(recipe),
            sub_order=sub_order,
            extension=tuple(script),
            open_flag=info.open_flag,
            variant=variant,
            via=tuple(via),
            note=note or (f"mirror of {info.mirror}" if info.mirror else None),
            bindings=tuple(sorted((bindings or {}).items())),
        )

    # script fragments
    def hub_at_a1(self, u: int) -> list[Branch]:
        return [br("f(a_1)=u", assign={self.a1: u})]

    def ends_pair(self, u: int, x: int, name: str = "x") -> list[Branch]:
        """``u`` hits all of ``G'`` and ``x`` misses at most one vertex there."""
        a1, ar1, a2, ar2 = self.a1, self.ar1, self.a2, self.ar2
        return [
            br(f"{name} misses f'(a_2)", lambda c: c.misses(x, a2), {a1: u, ar1: x}),
            br(f"{name} misses f'(a_{{r-2}})", lambda c: c.misses(x, ar2), {ar1: u, a1: x}),
            br(f"{name} hits f'(a_2) and f'(a_{{r-2}})", always, {a1: u, ar1: x}),
        ]

    def swap_a2(self, hub: int, partner: int, name: str = "u") -> list[Branch]:
        """``f'(a_2)`` is adjacent to ``hub``, or is moved onto it and ``a_1`` goes to ``partner``."""
        a1, a2 = self.a1, self.a2
        return [
            br(f"{name} hits f'(a_2)", lambda c: c.hits(hub, a2), {a1: hub}),
            br(f"f'(a_2):={name}", always, {a1: partner}, swaps=[(a2, hub)]),
        ]

    def center_or_hub(self, hub: int, center: int, rim: Sequence[int],
                      with_a0: bool) -> list[Branch]:
        """``f'(a_2)`` on a rim vertex: use ``center`` for ``a_1``; otherwise ``hub``.

        With ``with_a0`` the other rim vertex is placed on ``a_0``, freeing it
        from its holder (moved onto ``hub``) when needed.
        """
        a0, a1, a2 = self.a0, self.a1, self.a2
        out = []
        for x in rim:
            for o in rim:
                if o == x:
                    continue
                at_x = lambda c, x=x: c.at(a2, x)
                if with_a0:
                    out.append(br(f"f'(a_2) on rim, other rim vertex free",
                                  lambda c, x=x, o=o: c.at(a2, x) and not c.used(o),
                                  {a1: center, a0: o}))
                    out.append(br(f"f'(a_2) on rim, holder of other rim vertex to hub",
                                  at_x, {a1: center, a0: o}, swaps=[(holder_of(o), hub)]))
                else:
                    out.append(br("f'(a_2) on rim", at_x, {a1: center}))
                    out.append(br("f'(a_2) on rim, holder of other rim vertex to hub",
                                  at_x, {a1: center}, swaps=[(holder_of(o), hub)]))
        out.append(br("hub hits f'(a_2)", lambda c: c.hits(hub, a2), {a1: hub}))
        return out


# 2.1 --------------------------------------------------------------------

def case_2_1(env: CaseEnv, u: int) -> ReductionPlan:
    if env.deg[u] != env.k + 3:
        raise PreconditionMismatch("2.1 needs d(u) = k+3")
    return env.plan("2.1", [("u", u), ("z", env.z)], MINUS_A1_BRANCH, env.hub_at_a1(u),
                    bindings={"u": u, "z": env.z})


# 2.2 --------------------------------------------------------------------

def _script_2_2_2a(env: CaseEnv, u: int, x: int) -> list[Branch]:
    a1, a2, ar, ar1 = env.a1, env.a2, env.ar, env.ar1
    return [
        br("x hits f'(a_2)", lambda c: c.hits(x, a2), {a1: x, ar: u}),
        br("x hits f'(a_{r-1})", lambda c: c.hits(x, ar1), {ar: x, a1: u}),
        br("f'(a_{r-1}):=x", always, {a1: u}, swaps=[(ar1, x)]),
    ]


def case_2_2(env: CaseEnv, u: int) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    if deg[u] != k + 2:
        raise PreconditionMismatch("2.2 needs d(u) = k+2")
    (x,) = env.nn(u)
    b = {"u": u, "z": z, "x": x}
    if deg[x] <= k - 2:
        return env.plan("2.2.1", [("u", u), ("x", x)], MINUS_A1_BRANCH, env.hub_at_a1(u), bindings=b)
    if not env.hits(x, z):
        return env.plan("2.2.2(A)", [("u", u), ("z", z), ("x", x)], MINUS_A1_BRANCH_AR,
                        _script_2_2_2a(env, u, x), bindings=b)
    if deg[x] > k - 1:
        return env.plan("2.2.2(B.1)", [("u", u), ("z", z), ("x", x)], MINUS_A1_BRANCH_AR,
                        _script_2_2_2a(env, u, x), bindings=b)
    ys = [y for y in env.nn(x) if y != u]
    for d, label in ((k + 2, "(a)"), (k + 1, "(b)")):
        y = next((y for y in ys if deg[y] == d), None)
        if y is not None:
            script = ([br("f(a_1)=u, f(a_{r-1})=y", always, {env.a1: u, env.ar1: y})]
                      if label == "(a)" else env.ends_pair(u, y, "y"))
            return env.plan("2.2.2(B.2)" + label, [("u", u), ("z", z), ("y_i", y), ("x", x)],
                            MINUS_BOTH, script, bindings={**b, "y": y})
    y = next((y for y in ys if deg[y] == k and not env.hits(y, z)), None)
    if y is not None:
        return env.plan("2.2.2(B.2)(c)", [("u", u), ("z", z), ("y_i", y), ("x", x)],
                        MINUS_BOTH, env.ends_pair(u, y, "y"), bindings={**b, "y": y})
    y = next((y for y in ys if deg[y] <= k - 2), None)
    if y is not None:
        return env.plan("2.2.2(B.2)(d)", [("u", u), ("y_i", y), ("x", x)], MINUS_A1_BRANCH_AR,
                        _script_2_2_2a(env, u, x), bindings={**b, "y": y})
    if env.dT1 + env.dTr1 >= 5:
        y1, y2 = ys[0], ys[1]
        return env.plan("2.2.2(B.2)(e.1)",
                        [("u", u), ("z", z), ("y_1", y1), ("y_2", y2), ("x", x)],
                        MINUS_BOTH, env.ends_pair(u, x), bindings={**b, "y_1": y1, "y_2": y2})
    a0, a1 = env.a0, env.a1
    script = [
        br("f(a_1)=u, f(a_0)=z", always, {a1: u, a0: z}),
        br("f(a_1)=z, f(a_0)=u", always, {a1: z, a0: u}),
    ]
    return env.plan("2.2.2(B.2)(e.2)", [("u", u), ("z", z)], MINUS_A0A1, script, bindings=b)


# 2.3 --------------------------------------------------------------------

def case_2_3(env: CaseEnv, u: int) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    if deg[u] != k + 1:
        raise PreconditionMismatch("2.3 needs d(u) = k+1")
    x1, x2 = sorted(env.nn(u), key=lambda v: (-deg[v], v))
    d1, d2 = deg[x1], deg[x2]
    b = {"u": u, "z": z, "x_1": x1, "x_2": x2}
    if env.dT1 + env.dTr1 >= 5:
        return _case_2_3_1(env, u, x1, x2, b)
    return _case_2_3_2(env, u, x1, x2, b)


def _case_2_3_1(env: CaseEnv, u: int, x1: int, x2: int, b: dict) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    d1, d2 = deg[x1], deg[x2]
    if not env.hits(x1, x2):
        if d1 + d2 <= 2 * k - 3:
            return env.plan("2.3.1(A.1)", [("u", u), ("x_1", x1), ("x_2", x2)],
                            MINUS_A1_BRANCH, env.hub_at_a1(u), bindings=b)
        if d1 == k - 1:
            ys = [y for y in env.nn(x1) if y not in (u, x2)]
            if z not in ys:
                return env.plan("2.3.1(A.2)(a)",
                                [("u", u), ("z", z), ("x_1", x1), ("x_2", x2), ("y_1", ys[0])],
                                MINUS_BOTH, env.ends_pair(u, x1, "x_1"), variant="z∉Y",
                                bindings={**b, "y_1": ys[0]})
            a1, ar1 = env.a1, env.ar1
            return env.plan("2.3.1(A.2)(a)",
                            [("u", u), ("x_1", x1), ("x_2", x2), ("y_1", ys[0]), ("y_2", ys[1])],
                            MINUS_BOTH,
                            [br("f(a_{r-1})=u, f(a_1)=x_1", always, {ar1: u, a1: x1})]
                            + env.ends_pair(u, x1, "x_1"),
                            variant="z∈Y", bindings={**b, "y_1": ys[0], "y_2": ys[1]})
        return env.plan("2.3.1(A.2)(b)", [("u", u), ("z", z), ("x_1", x1), ("x_2", x2)],
                        MINUS_BOTH, env.ends_pair(u, x1, "x_1"), bindings=b)
    if d1 + d2 <= 2 * k - 2:
        return env.plan("2.3.1(B.1)", [("u", u), ("x_1", x1), ("x_2", x2)],
                        MINUS_A1_BRANCH, env.hub_at_a1(u), bindings=b)
    if d1 == k:
        ys = [y for y in env.nn(x1) if y != u]
        if z not in ys:
            return env.plan("2.3.1(B.2)(a)",
                            [("u", u), ("z", z), ("x_1", x1), ("x_2", x2), ("y_1", ys[0])],
                            MINUS_BOTH, env.ends_pair(u, x1, "x_1"), variant="z∉Y",
                            bindings={**b, "y_1": ys[0]})
        return env.plan("2.3.1(B.2)(a)", [("u", u), ("x_1", x1), ("x_2", x2), ("z", z)],
                        MINUS_BOTH, env.ends_pair(u, x1, "x_1"), variant="z∈Y", bindings=b)
    return env.plan("2.3.1(B.2)(b)", [("u", u), ("x_1", x1), ("x_2", x2), ("z", z)],
                    MINUS_BOTH, env.ends_pair(u, x1, "x_1"), bindings=b)


def _case_2_3_2(env: CaseEnv, u: int, x1: int, x2: int, b: dict) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    a0, a1, a2, ar, ar1 = env.a0, env.a1, env.a2, env.ar, env.ar1
    common = [v for v in range(env.n)
              if v != u and env.hits(v, x1) and env.hits(v, x2)]
    low = [v for v in common if deg[v] <= k]
    if low:
        v = low[0]
        script = [
            br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u}),
            br("f(a_1)=v, f(a_0)=u", always, {a1: v, a0: u}),
        ]
        return env.plan("2.3.2(A)", [("u", u), ("v", v)], MINUS_A0A1, script,
                        bindings={**b, "v": v})
    if common:
        v = common[0]
        y1, y2 = env.nn(v)
        X, Y = (x1, x2), (y1, y2)
        script = [
            br("f'(a_2)∈X, f'(a_{r-1})∈Y", lambda c: c.at(a2, *X) and c.at(ar1, *Y),
               {a1: v, ar: u}),
            br("f'(a_2)∈X, f'(a_{r-1})∈X", lambda c: c.at(a2, *X) and c.at(ar1, *X),
               {a1: v}, swaps=[(ar1, u)]),
            br("f'(a_2)∈Y, f'(a_{r-1})∈Y", lambda c: c.at(a2, *Y) and c.at(ar1, *Y),
               {a1: u}, swaps=[(ar1, v)]),
            br("f'(a_2)∈Y, f'(a_{r-1})∈X", lambda c: c.at(a2, *Y) and c.at(ar1, *X),
               {a1: u, ar: v}),
            br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u, ar: v}),
            br("f'(a_2) hits v", lambda c: c.hits(v, a2), {a1: v, ar: u}),
        ]
        return env.plan("2.3.2(B)", [("u", u), ("v", v), ("z", z)], MINUS_A0A1AR, script,
                        edges=[e for e in ((x1, x2), (y1, y2)) if env.hits(*e)],
                        bindings={**b, "v": v, "y_1": y1, "y_2": y2})
    to_c = env.hub_at_a1(u)
    c_roles = [("u", u), ("x_1", x1), ("x_2", x2)]
    if not env.hits(x1, x2):
        return env.plan("2.3.2(C)", c_roles, MINUS_A0A1, to_c, sub_order=k - 2, bindings=b)
    if deg[x1] + deg[x2] <= k + 2:
        return env.plan("2.3.2(D)", c_roles, MINUS_A0A1, to_c, sub_order=k - 2,
                        variant="as (C)", bindings=b)
    if z in (x1, x2):
        # z is one of the pair, so only u and z go: G' = G-{u,z}, and u misses z.
        # If x hits no free vertex, x sees all of f'(T'); nothing else sees
        # both x and z, so z's other neighbours are all free.
        x = x2 if z == x1 else x1
        script = [
            br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u}),
            br("f'(a_2)=x, a_1 on a common neighbour of x and u", lambda c: c.at(a2, x),
               {a0: u}),
            br("f'(a_2)=x, f(a_1)=z", lambda c: c.at(a2, x), {a1: z}),
        ]
        return env.plan("2.3.2(D)", [("u", u), ("z", z)], MINUS_A0A1, script,
                        variant="z∈{x_1,x_2}", bindings=b)
    xa, xb = (x1, x2) if env.hits(z, x1) else (x2, x1)
    script = [
        br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u}),
        br("f'(a_2)=x_1", lambda c: c.at(a2, xa), {a1: z, a0: u}),
        br("f'(a_2)=x_2, x_1 free", lambda c: c.at(a2, xb) and not c.used(xa), {a1: xa, a0: z}),
        br("f'(a_2)=x_2, holder of x_1 to u", lambda c: c.at(a2, xb), {a1: xa, a0: z},
           swaps=[(holder_of(xa), u)]),
    ]
    return env.plan("2.3.2(D)", [("u", u), ("z", z)], MINUS_A0A1, script, edges=[(xa, xb)],
                    bindings={**b, "x_1": xa, "x_2": xb})


# 2.4 --------------------------------------------------------------------

def _u_prime(env: CaseEnv, u: int, S: Sequence[int], label: str) -> int:
    cand = [v for v in range(env.n) if v != u and v not in S and env.deg[v] >= env.k - 1]
    if not cand:
        raise Uncovered(label, "no vertex outside S ∪ {u} of degree at least k-1")
    return cand[0]


def case_2_4(env: CaseEnv, u: int, via: tuple[str, ...] = ()) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    if deg[u] != k:
        raise PreconditionMismatch("2.4 needs d(u) = k")
    S = env.nn(u)
    E = env.edges_in(S)
    a0, a1, a2, ar1 = env.a0, env.a1, env.a2, env.ar1
    if not E:
        script = [
            br("f'(a_1) hits u", lambda c: c.hits(u, a1), {a0: u}),
            br("f'(a_1):=u", always, swaps=[(a1, u)]),
        ]
        return env.plan("2.4.1", [("u", u)], MINUS_A0, script, via=via,
                        bindings={"u": u, "z": z})
    if len(E) == 1:
        return _case_2_4_2(env, u, S, E[0], via)
    if len(E) == 2:
        return _case_2_4_3(env, u, S, E, via)
    return _case_2_4_4(env, u, S, via)


def _case_2_4_2(env, u, S, edge, via) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    a0, a1, a2, ar1 = env.a0, env.a1, env.a2, env.ar1
    x1, x2 = edge
    (x3,) = [x for x in S if x not in edge]
    b = {"u": u, "z": z, "x_1": x1, "x_2": x2, "x_3": x3}
    if env.dT1 + env.dTr1 >= 5:
        if deg[x1] >= k - 1 and deg[x2] >= k - 1:
            script = [br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u})]
            for xi, xo in ((x1, x2), (x2, x1)):
                script.append(br("f'(a_2)=x_i, other free",
                                 lambda c, xi=xi, xo=xo: c.at(a2, xi) and not c.used(xo), {a1: xo}))
                script.append(br("f'(a_2)=x_i, holder of other to u",
                                 lambda c, xi=xi: c.at(a2, xi), {a1: xo},
                                 swaps=[(holder_of(xo), u)]))
            if x3 != z:
                return env.plan("2.4.2(A.1)", [("u", u), ("z", z), ("x_3", x3)], MINUS_A1_BRANCH,
                                script, edges=[(x1, x2)], via=via, bindings=b)
            return env.plan("2.4.2(A.1)", [("u", u), ("z", z)], MINUS_A1_BRANCH, script,
                            edges=[(x1, x2)], variant="x_3=z", via=via, bindings=b)
        if deg[x3] >= k - 1:
            if deg[x1] > k - 2:
                x1, x2 = x2, x1
            roles = [("u", u), ("z", z), ("x_1", x1), ("x_2", x2), ("x_3", x3)]
            variant = None
            if z in (x1, x2):
                roles = [r for r in roles if r[0] != "z"]
                variant = "z∈{x_1,x_2}"
            return env.plan("2.4.2(A.2)", roles, MINUS_BOTH, env.ends_pair(u, x3, "x_3"),
                            variant=variant, via=via, bindings={**b, "x_1": x1, "x_2": x2})
        if {deg[x1], deg[x2]} & {k} and min(deg[x1], deg[x2]) <= k - 2:
            if deg[x1] != k:
                x1, x2 = x2, x1
            roles = [("u", u), ("z", z), ("x_1", x1), ("x_2", x2), ("x_3", x3)]
            variant = None
            if z in (x2, x3):
                roles = [r for r in roles if r[0] != "z"]
                variant = "z∈{x_2,x_3}"
            return env.plan("2.4.2(A.3)", roles, MINUS_BOTH, env.ends_pair(u, x1, "x_1"),
                            variant=variant, via=via, bindings={**b, "x_1": x1, "x_2": x2})
        up = _u_prime(env, u, S, "2.4.2(A.4)")
        return env.plan("2.4.2(A.4)", [("u", u), ("u'", up)], MINUS_A1_BRANCH,
                        env.swap_a2(u, up), edges=[(x1, x2)], via=via, bindings={**b, "u'": up})
    # both end vertices of the path have tree degree 2
    for xa, xb in ((x1, x2), (x2, x1)):
        w = next((w for w in range(env.n)
                  if w != u and w not in S and env.hits(w, x3) and env.hits(w, xa)), None)
        if w is None:
            continue
        script = [
            br("f'(a_2) hits u", lambda c: c.hits(u, a2), {a1: u}),
            br("f'(a_2)∈{x_1,x_3}", lambda c: c.at(a2, xa, x3), {a1: w, a0: u}),
            br("f'(a_2)=x_2, x_1 free", lambda c: c.at(a2, xb) and not c.used(xa), {a1: xa, a0: w}),
            br("f'(a_2)=x_2, holder of x_1 to u", lambda c: c.at(a2, xb), {a1: xa, a0: w},
               swaps=[(holder_of(xa), u)]),
        ]
        return env.plan("2.4.2(B)", [("u", u), ("w", w)], MINUS_A0A1, script,
                        edges=[(xa, xb)], via=via, bindings={**b, "x_1": xa, "x_2": xb, "w": w})
    up = _u_prime(env, u, S, "2.4.2(B)")
    return env.plan("2.4.2(B)", [("u", u), ("u'", up)], MINUS_A0A1, env.swap_a2(u, up),
                    edges=[(x1, x2)], variant="no common neighbour", via=via,
                    bindings={**b, "u'": up})


def _case_2_4_3(env, u, S, E, via) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    a1, a2, ar1, ar2 = env.a1, env.a2, env.ar1, env.ar2
    (x1,) = [x for x in S if all(x in e for e in E)]
    x2, x3 = [x for x in S if x != x1]
    b = {"u": u, "z": z, "x_1": x1, "x_2": x2, "x_3": x3}
    if env.dT1 == 2:
        return env.plan("2.4.3(A)", [("u", u), ("x_1", x1)], MINUS_A0A1,
                        env.center_or_hub(u, x1, (x2, x3), with_a0=True), via=via, bindings=b)
    if deg[x1] >= k - 1:
        script = env.center_or_hub(u, x1, (x2, x3), with_a0=False)
        if z in (x2, x3):
            return env.plan("2.4.3(B)(a)", [("u", u), ("x_1", x1), ("z", z)], MINUS_A1_BRANCH,
                            script, variant="z∈{x_2,x_3}", via=via, bindings=b)
        return env.plan("2.4.3(B)(a)", [("u", u), ("z", z), ("x_1", x1)], MINUS_A1_BRANCH,
                        script, via=via, bindings=b)
    if deg[x2] != k and deg[x3] == k:
        x2, x3 = x3, x2
    if deg[x2] == k:
        (y,) = [y for y in env.nn(x2) if y not in (u, x3)]
        here = via + ("2.4.3(B)(b)",)
        if not env.hits(y, x3) or deg[y] >= k - 1:
            return case_2_4(env, x2, via=here)
        roles = [("u", u), ("z", z), ("x_2", x2), ("x_3", x3), ("y", y)]
        variant = None
        if z in (y, x3):
            roles = [("u", u), ("x_2", x2), ("x_3", x3), ("y", y)]
            variant = "z=y" if z == y else "z=x_3"
        elif z == x1:
            variant = "z=x_1"
        script = [
            br("f'(a_2)=x_1", lambda c: c.at(a2, x1), {a1: x2, ar1: u}),
            br("f'(a_{r-2})=x_1", lambda c: c.at(ar2, x1), {ar1: x2, a1: u}),
            br("x_1 away from both", always, {a1: u, ar1: x2}),
        ]
        return env.plan("2.4.3(B)(b)", roles, MINUS_BOTH, script, variant=variant, via=via,
                        bindings={**b, "x_2": x2, "x_3": x3, "y": y})
    if deg[x2] == k - 1 and deg[x3] == k - 1:
        script = [
            br("f'(a_2)=x_1, a_1 to x_2", lambda c: c.at(a2, x1), {a1: x2}),
            br("f'(a_2)=x_1, a_1 to x_3", lambda c: c.at(a2, x1), {a1: x3}),
            br("f(a_1)=u", always, {a1: u}),
        ]
        return env.plan("2.4.3(B)(c)", [("u", u), ("x_2", x2), ("x_3", x3)], MINUS_A1_BRANCH,
                        script, via=via, bindings=b)
    up = _u_prime(env, u, S, "2.4.3(B)(d)")
    return env.plan("2.4.3(B)(d)", [("u", u), ("u'", up), ("x_1", x1)], MINUS_A1_BRANCH,
                    env.swap_a2(u, up), via=via, bindings={**b, "u'": up})


def _case_2_4_4(env, u, S, via) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    b = {"u": u, "z": z}
    if env.dT1 == 2:
        low = [x for x in S if deg[x] <= k - 1]
        x1 = low[0] if low else S[0]
        rim = tuple(x for x in S if x != x1)
        edges = [rim] if low else []
        return env.plan("2.4.4(A)", [("u", u), ("x_1", x1)], MINUS_A0A1,
                        env.center_or_hub(u, x1, rim, with_a0=True), edges=edges,
                        variant=None if low else "all of degree k", via=via,
                        bindings={**b, "x_1": x1})
    high = [x for x in S if deg[x] >= k - 1]
    if high:
        x1 = high[0]
        rim = tuple(x for x in S if x != x1)
        roles = [("u", u), ("z", z), ("x_1", x1)]
        return env.plan("2.4.4(B)", roles, MINUS_A1_BRANCH,
                        env.center_or_hub(u, x1, rim, with_a0=False), edges=[rim], via=via,
                        variant="z on rim" if z in rim else None, bindings={**b, "x_1": x1})
    x1 = S[0]
    rim = tuple(x for x in S if x != x1)
    up = _u_prime(env, u, S, "2.4.4(B)")
    return env.plan("2.4.4(B)", [("u", u), ("u'", up), ("x_1", x1)], MINUS_A1_BRANCH,
                    env.swap_a2(u, up), edges=[rim], variant="via u'", via=via,
                    bindings={**b, "x_1": x1, "u'": up})


# 2.5 --------------------------------------------------------------------

def c4_order(env: CaseEnv, S: Sequence[int]) -> list[int]:
    """Cyclic order of a 4-cycle: smallest vertex, then its smaller neighbour."""
    start = min(S)
    nxt = min(x for x in S if env.hits(start, x))
    cyc = [start, nxt]
    while len(cyc) < 4:
        cyc.append(next(x for x in S if x not in cyc and env.hits(cyc[-1], x)))
    return cyc


def case_2_5(env: CaseEnv, u: int | None = None) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    U = env.of_degree(k - 1)
    if u is not None:
        if deg[u] != k - 1:
            raise PreconditionMismatch("2.5 needs d(u) = k-1")
        U = [u] + [v for v in U if v != u]
    if len(U) < 4:
        raise Uncovered("2.5", f"only {len(U)} vertices of degree k-1")
    U4 = U[:4]
    S = {v: env.nn(v) for v in U4}
    E = {v: env.edges_in(S[v]) for v in U4}
    a0, a1, a2, ar, ar1, ar2 = env.a0, env.a1, env.a2, env.ar, env.ar1, env.ar2
    for v in U4:
        if len(E[v]) <= 1:
            script = [
                br("f'(a_1) hits u_i", lambda c, v=v: c.hits(v, a1), {a0: v}),
                br("f'(a_1):=u_i", always, swaps=[(a1, v)]),
            ]
            return env.plan("2.5(pre)", [("u_i", v)], MINUS_A0, script, edges=E[v],
                            bindings={"u_i": v, "z": z})
    if env.dT1 + env.dTr1 >= 5:
        return _case_2_5_1(env, U4, S, E)
    return _case_2_5_2(env, U4, S, E)


def _case_2_5_1(env, U4, S, E) -> ReductionPlan:
    k, z = env.k, env.z
    a1, a2, ar, ar1, ar2 = env.a1, env.a2, env.ar, env.ar1, env.ar2
    for i, p in enumerate(U4):
        for q in U4[i + 1:]:
            if env.hits(p, q):
                variant = "z∈S_1" if z in S[p] else None
                return env.plan("2.5.1(A)", [("u_1", p), ("u_2", q), ("z", z)], MINUS_A1_BRANCH,
                                env.swap_a2(p, q, "u_1"), edges=E[p], variant=variant,
                                bindings={"u_1": p, "u_2": q, "z": z})
    ys = {v: next(y for y in S[v] if y not in U4) for v in U4}
    for i, p in enumerate(U4):
        for q in U4[i + 1:]:
            if ys[p] != ys[q]:
                y1, y2 = ys[p], ys[q]
                script = [
                    br("f'(a_2)=y_1", lambda c: c.at(a2, y1), {a1: q, ar1: p}),
                    br("f'(a_2)=y_2", lambda c: c.at(a2, y2), {a1: p, ar1: q}),
                    br("f'(a_{r-2})=y_1", lambda c: c.at(ar2, y1), {a1: p, ar1: q}),
                    br("f'(a_{r-2})=y_2", lambda c: c.at(ar2, y2), {a1: q, ar1: p}),
                    br("y_1, y_2 away from a_2, a_{r-2}", always, {a1: p, ar1: q}),
                ]
                rest = [v for v in U4 if v not in (p, q)]
                roles = [("u_1", p), ("u_2", q), ("u_3", rest[0]), ("u_4", rest[1])]
                return env.plan("2.5.1(B.1)", roles, MINUS_BOTH, script,
                                bindings={"u_1": p, "u_2": q, "y_1": y1, "y_2": y2, "z": z})
    y = ys[U4[0]]
    u1, u2, u3, u4 = U4
    if env.dTr1 == 2:
        w = min(x for x in env.G.neighbors(y) if x not in U4)
        others = (u2, u3, u4, y)
        script = [
            br("f'(a_{r-2})∈{u_2,u_3,u_4,y}", lambda c: c.at(ar2, *others), {ar1: w, ar: u1}),
            br("f(a_{r-1})=u_1, f(a_r)=w", always, {ar1: u1, ar: w}),
        ]
        return env.plan("2.5.1(B.2)(a)", [("u_1", u1), ("w", w)], MINUS_AR1AR, script,
                        bindings={"u_1": u1, "w": w, "y": y, "z": z})
    roles = [("u_1", u1), ("u_2", u2), ("u_3", u3), ("u_4", u4), ("y", y), ("z", z)]
    variant = None
    if z == y:
        roles = roles[:5]
        variant = "z=y"
    script = [br("f(a_1)=u_1, f(a_{r-1})=u_2", always, {a1: u1, ar1: u2})]
    return env.plan("2.5.1(B.2)(b)", roles, MINUS_BOTH, script, variant=variant,
                    bindings={"u_1": u1, "u_2": u2, "y": y, "z": z})


def _deg3_in(env: CaseEnv, S: Sequence[int], E) -> int | None:
    for x in S:
        if sum(x in e for e in E) == 3:
            return x
    return None


def _plan_b1(env: CaseEnv, label: str, h: int, x11: int, S, variant=None) -> ReductionPlan:
    rest = tuple(x for x in S if x != x11)
    a0, a1, a2 = env.a0, env.a1, env.a2
    script = [br("u_1 hits f'(a_2)", lambda c: c.hits(h, a2), {a1: h})]
    script += env.center_or_hub(h, x11, rest, with_a0=True)[:-1]
    return env.plan(label, [("u_1", h), ("x_11", x11)], MINUS_A0A1, script,
                    edges=env.edges_in(rest), variant=variant,
                    bindings={"u_1": h, "x_11": x11, "z": env.z})


def _plan_a1(env: CaseEnv, label: str, h: int, p: int, cyc: list[int], via=()) -> ReductionPlan:
    a0, a1, a2, ar1, ar2 = env.a0, env.a1, env.a2, env.ar1, env.ar2
    c0, c1, c2, c3 = cyc
    script = [
        br("f'(a_2)=x_13, f'(a_{r-2})=x_14", lambda c: c.at(a2, c2) and c.at(ar2, c3),
           {a1: c1, a0: c0, ar1: p}, swaps=[(ar2, h)]),
        br("f'(a_2)=x_14, f'(a_{r-2})=x_13", lambda c: c.at(a2, c3) and c.at(ar2, c2),
           {a1: c0, a0: c1, ar1: p}, swaps=[(ar2, h)]),
        br("f'(a_2) hits u_1", lambda c: c.hits(h, a2), {a1: h, a0: p}),
    ]
    return env.plan(label, [("u_1", h), ("u_2", p), ("x_11", c0), ("x_12", c1)], MINUS_ENDS,
                    script, edges=[(c2, c3)], via=via,
                    bindings={"u_1": h, "u_2": p, "x_11": c0, "x_12": c1, "z": env.z})


def _plan_b(env: CaseEnv, label: str, h: int, others: list[int], cyc: list[int],
            via=()) -> ReductionPlan:
    a1, a2, ar1, ar2 = env.a1, env.a2, env.ar1, env.ar2
    p = next(o for o in others if env.hits(h, o))
    q = next(o for o in others if not env.hits(h, o))
    i = cyc.index(q)
    cyc = cyc[i + 1:] + cyc[:i + 1]  # q last, i.e. q plays x_14
    x11, x12, x13, _ = cyc
    z12 = [v for v in env.nn(q) if v not in (h, x12)]
    script = [
        br("f'(a_2)=x_11, f'(a_{r-2})=x_13", lambda c: c.at(a2, x11) and c.at(ar2, x13),
           {a1: q, ar1: p}, swaps=[(ar2, h)]),
        br("f'(a_2)=x_13, f'(a_{r-2})=x_11", lambda c: c.at(a2, x13) and c.at(ar2, x11),
           {a1: q, ar1: p}, swaps=[(ar2, h)]),
    ]
    edges = [tuple(z12)] if len(z12) == 2 and p not in z12 and env.hits(*z12) else []
    return env.plan(label, [("u_1", h), ("u_2", p), ("u_4", q), ("x_12", x12)], MINUS_ENDS,
                    script, edges=edges, via=via,
                    variant=None if p not in z12 else "u_2∈{z_1,z_2}",
                    bindings={"u_1": h, "u_2": p, "u_4": q, "z": env.z})


def _case_2_5_2(env, U4, S, E) -> ReductionPlan:
    k, z, deg = env.k, env.z, env.deg
    a0, a1, a2, ar1, ar2 = env.a0, env.a1, env.a2, env.ar1, env.ar2
    for h in U4:
        if len(E[h]) not in (2, 3):
            continue
        others = [v for v in U4 if v != h]
        uj = next((v for v in others if env.hits(h, v)), None)
        if uj is not None:
            return env.plan("2.5.2(A)", [("u_1", h), ("u_j", uj)], MINUS_A0A1,
                            env.swap_a2(h, uj, "u_1"), edges=E[h],
                            bindings={"u_1": h, "u_j": uj, "z": z})
        (x14,) = [x for x in S[h] if x not in U4]
        partner = next((v for v in others if env.hits(x14, v)), None)
        if partner is not None:
            rest = [v for v in others if v != partner]
            roles = [("u_1", h), ("u_2", partner), ("u_3", rest[0]), ("u_4", rest[1])]
            script = [
                br("f(a_1)=u_2, f(a_{r-1})=u_1", always, {a1: partner, ar1: h}),
                br("f(a_1)=u_1, f(a_{r-1})=u_2", always, {a1: h, ar1: partner}),
            ]
            return env.plan("2.5.2(A.1)", roles, MINUS_ENDS, script,
                            bindings={"u_1": h, "u_2": partner, "x_14": x14, "z": z})
        u2 = next(v for v in others if all(env.hits(v, o) for o in others if o != v))
        u3, u4 = [v for v in others if v != u2]
        edges: list[tuple[int, int]] = []
        script: list[Branch] = []
        if env.hits(u3, u4):
            z1, z2 = [v for v in env.nn(u3) if v not in (h, x14)]
            if env.hits(z1, z2):
                edges = [(z1, z2)]
            Z = (z1, z2)
            script = [
                br("f'(a_2), f'(a_{r-2}) in {z_1,z_2}", lambda c: c.at(a2, *Z) and c.at(ar2, *Z),
                   {a1: u4, ar1: h}, swaps=[(a2, u3)]),
                br("f'(a_2)∈{z_1,z_2}, f'(a_{r-2})=u_2", lambda c: c.at(a2, *Z) and c.at(ar2, u2),
                   {a1: h, ar1: u4}),
            ]
        script += [
            br("f(a_1)=u_1, f(a_{r-1})=u_3", always, {a1: h, ar1: u3}),
            br("f(a_1)=u_3, f(a_{r-1})=u_1", always, {a1: u3, ar1: h}),
        ]
        return env.plan("2.5.2(A.2)", [("u_1", h), ("x_14", x14), ("u_3", u3), ("u_4", u4)],
                        MINUS_ENDS, script, edges=edges,
                        bindings={"u_1": h, "u_2": u2, "x_14": x14, "z": z})
    for h in U4:
        x11 = _deg3_in(env, S[h], E[h])
        if x11 is not None and len(E[h]) in (4, 5):
            label = "2.5.2(B.1)" if len(E[h]) == 4 else "2.5.2(C)"
            return _plan_b1(env, label, h, x11, S[h])
    c4 = [h for h in U4 if len(E[h]) == 4]
    for h in c4:
        others = [v for v in U4 if v != h]
        cyc = c4_order(env, S[h])
        if not all(env.hits(h, o) for o in others):
            if any(env.hits(h, o) for o in others):
                return _plan_b(env, "2.5.2(B.2)(b)", h, others, cyc)
            continue
        deaf = next((o for o in others if not any(env.hits(o, x) for x in cyc)), None)
        if deaf is not None:
            return _plan_a1(env, "2.5.2(B.2)(a.1)", h, deaf, cyc)
        multi = next((o for o in others if sum(env.hits(o, x) for x in cyc) >= 2), None)
        if multi is not None:
            return _plan_a2(env, h, multi, cyc)
        return _plan_a3(env, h, others, cyc, S)
    for h in c4:
        others = [v for v in U4 if v != h]
        if any(env.hits(h, o) for o in others):
            continue
        for h2 in others:
            if h2 not in c4:
                continue
            o2 = [v for v in U4 if v != h2]
            hit = sum(env.hits(h2, o) for o in o2)
            if 0 < hit < 3:
                return _plan_b(env, "2.5.2(B.2)(c)", h2, o2, c4_order(env, S[h2]),
                               via=("2.5.2(B.2)(c)",))
        raise Uncovered("2.5.2(B.2)(c)", "no re-rooting hub found")
    # every S_i induces K_4
    h = U4[0]
    low = [x for x in S[h] if deg[x] <= k - 2]
    if low:
        return _plan_b1(env, "2.5.2(D)", h, low[0], S[h], variant="low-degree x")
    if all(env.hits(z, x) for x in S[h]):
        script = [
            br("f'(a_2) hits u_1", lambda c: c.hits(h, a2), {a1: h, a0: z}),
            br("f(a_0)=u_1, f(a_1)=z", always, {a0: h, a1: z}),
        ]
        return env.plan("2.5.2(D)", [("u_1", h), ("z", z)], MINUS_A0A1, script,
                        variant="z hits S_1", bindings={"u_1": h, "z": z})
    return env.plan("2.5.2(D)", [("u_1", h)], MINUS_A0, [], variant="fallback-oracle",
                    bindings={"u_1": h, "z": z})


def _plan_a2(env: CaseEnv, h: int, p: int, cyc: list[int]) -> ReductionPlan:
    a0, a1, a2 = env.a0, env.a1, env.a2
    hit = [x for x in cyc if env.hits(p, x)]
    opposite = next(((cyc[i], cyc[(i + 2) % 4]) for i in range(4)
                     if cyc[i] in hit and cyc[(i + 2) % 4] in hit), None)
    if opposite is not None:
        i = cyc.index(opposite[0])
        c = cyc[i:] + cyc[:i]  # p hits c[0] and c[2]
        x11, x12, x13, x14 = c
        edges = [(x11, x12), (x12, x13), (x13, x14)]
        script = [
            br("f'(a_2)∈{x_11,x_13}", lambda cx: cx.at(a2, x11, x13), {a1: p}),
            br("f'(a_2)=x_12", lambda cx: cx.at(a2, x12), {a1: p}, swaps=[(a2, h)]),
            br("f'(a_2)=x_14, x_13 free", lambda cx: cx.at(a2, x14) and not cx.used(x13),
               {a1: x13, a0: p}),
            br("f'(a_2)=x_14, holder of x_13 to u_1", lambda cx: cx.at(a2, x14),
               {a1: x13, a0: p}, swaps=[(holder_of(x13), h)]),
            br("f'(a_2) hits u_1", lambda cx: cx.hits(h, a2), {a1: h}),
        ]
        variant = "opposite"
    else:
        i = next(i for i in range(4) if cyc[i] in hit and cyc[(i + 1) % 4] in hit)
        c = cyc[i:] + cyc[:i]  # p hits c[0] and c[1]
        x11, x12, x13, x14 = c
        edges = [(x12, x13), (x13, x14), (x11, x14)]
        script = [
            br("f'(a_2)∈{x_11,x_12}", lambda cx: cx.at(a2, x11, x12), {a1: p}),
            br("f'(a_2)∈{x_13,x_14}", lambda cx: cx.at(a2, x13, x14), {a1: p}, swaps=[(a2, h)]),
            br("f'(a_2) hits u_1", lambda cx: cx.hits(h, a2), {a1: h}),
        ]
        variant = "adjacent"
    return env.plan("2.5.2(B.2)(a.2)", [("u_1", h), ("u_2", p)], MINUS_A0A1, script,
                    edges=edges, variant=variant, bindings={"u_1": h, "u_2": p, "z": env.z})


def _plan_a3(env: CaseEnv, h: int, others: list[int], cyc: list[int], S) -> ReductionPlan:
    a0, a1, a2 = env.a0, env.a1, env.a2
    target = {o: next(x for x in cyc if env.hits(o, x)) for o in others}
    pair = next(((p, q) for i, p in enumerate(others) for q in others[i + 1:]
                 if target[p] == target[q]), None)
    if pair is not None:
        p, q = pair
        xc = target[p]
        yp = next(v for v in env.nn(p) if v not in cyc)
        yq = next(v for v in env.nn(q) if v not in cyc)
        if yp == yq:
            Sp = [x for x in cyc if x != xc] + [yp]
            return _plan_a1(env, "2.5.2(B.2)(a.3)(i)", p, q, c4_order(env, Sp))
        path3 = [x for x in cyc if x != xc]
        i = cyc.index(xc)
        mid = cyc[(i + 2) % 4]
        ends = [x for x in path3 if x != mid]
        script = [
            br("f'(a_2) at an end", lambda c: c.at(a2, *ends), {a1: xc, a0: q}),
            br("f'(a_2) at an end, via p", lambda c: c.at(a2, *ends), {a1: xc, a0: p}),
            br("f'(a_2) at the middle", lambda c: c.at(a2, mid), {a1: q}, swaps=[(a2, h)]),
            br("f'(a_2)=y_p", lambda c: c.at(a2, yp), {a1: q}),
            br("f'(a_2)=y_q", lambda c: c.at(a2, yq), {a1: p}),
            br("f'(a_2) hits u_1", lambda c: c.hits(h, a2), {a1: h}),
        ]
        return env.plan("2.5.2(B.2)(a.3)(i)", [("u_1", h), ("u_2", p), ("u_3", q), ("x_14", xc)],
                        MINUS_ENDS, script, edges=env.edges_in(path3),
                        bindings={"u_1": h, "u_2": p, "u_3": q, "z": env.z})
    p, q = next((p, q) for i, p in enumerate(others) for q in others[i + 1:]
                if (cyc.index(target[p]) - cyc.index(target[q])) % 4 == 2)
    x11, x13 = target[p], target[q]
    i = cyc.index(x11)
    x12, x14 = cyc[(i + 1) % 4], cyc[(i + 3) % 4]
    yp = next(v for v in env.nn(p) if v not in cyc)
    yq = next(v for v in env.nn(q) if v not in cyc)
    script = [
        br("f'(a_2)∈{x_12,x_14}", lambda c: c.at(a2, x12, x14), {a1: x13, a0: q}),
        br("f'(a_2)∈{x_12,x_14}, swap", lambda c: c.at(a2, x12, x14), {a1: p}, swaps=[(a2, h)]),
        br("f'(a_2)∈{y_p,y_q}", lambda c: c.at(a2, yp, yq), {a1: h}),
        br("f'(a_2)=x_11", lambda c: c.at(a2, x11), {a1: p}),
        br("f'(a_2) hits u_1", lambda c: c.hits(h, a2), {a1: h}),
    ]
    return env.plan("2.5.2(B.2)(a.3)(ii)", [("u_1", h), ("u_2", p), ("u_3", q), ("x_13", x13)],
                    MINUS_ENDS, script, edges=[(x11, x12), (x11, x14)],
                    bindings={"u_1": h, "u_2": p, "u_3": q, "z": env.z})


HANDLERS: dict[str, Callable[..., ReductionPlan]] = {
    "2.1": case_2_1,
    "2.2": case_2_2,
    "2.3": case_2_3,
    "2.4": case_2_4,
    "2.5": case_2_5,
}
