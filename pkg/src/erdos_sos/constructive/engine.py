"""The inductive embedding algorithm: preamble, dispatch, and reduction executor."""

from __future__ import annotations

from ..embed import (
    UNSET,
    Embedding,
    PartialEmbedding,
    embed_backtracking,
    extend_leaves,
    pending_leaves,
    swap_image,
    validate_embedding,
)
from ..errors import (
    DeltaOutOfRange,
    DomainMismatch,
    HallViolation,
    Infeasible,
    NotAdjacent,
    PreconditionMismatch,
    ProofGap,
)
from ..graph import (
    Graph,
    Tree,
    avedeg,
    bits,
    degree_stats,
    delete_edges,
    delete_vertices,
    longest_path_decomposition,
    tree_diameter,
)
from .cases import HANDLERS, REGISTRY, CaseEnv, Uncovered
from .model import Branch, CaseTrace, ExtensionContext, Instance, ReductionPlan

CASE_BY_OFFSET = {3: "2.1", 2: "2.2", 1: "2.3", 0: "2.4", -1: "2.5"}


def peel_low_degree(inst: Instance) -> tuple[Instance, list[str], tuple[int, ...]]:
    """Delete vertices of degree below ``floor(k/2)``, smallest index first.

    Returns the peeled instance, one trace label per deletion, and the map
    from new vertex labels to the input's.
    """
    G, k = inst.G, inst.k
    kept = tuple(range(G.n))
    steps = []
    while True:
        low = next((v for v in range(G.n) if G.degree(v) < k // 2), None)
        if low is None or G.n == 1:
            break
        steps.append(f"peel(v={kept[low]})")
        G, sub = delete_vertices(G, [low])
        kept = tuple(kept[i] for i in sub)
    return Instance(G, inst.T), steps, kept


def select_z(G: Graph, k: int) -> int | None:
    """A minimum-degree vertex when ``delta <= k-5``; otherwise ``None``."""
    deg = G.degrees()
    delta = min(deg)
    if delta >= k - 4:
        return None
    return deg.index(delta)


def dispatch_delta_case(inst: Instance, z: int | None = None) -> str:
    _, Delta, _ = degree_stats(inst.G)
    case = CASE_BY_OFFSET.get(Delta - inst.k)
    if case is None:
        raise DeltaOutOfRange(f"Δ={Delta} outside [k-1, k+3] for k={inst.k}")
    return case


def oriented_decomposition(T: Tree):
    dec = longest_path_decomposition(T)
    if T.degree(dec.a(-2)) > T.degree(dec.a(1)):
        dec = dec.reversed(T)
    return dec


def apply_case(inst: Instance, case: str, bindings: dict[str, int]) -> ReductionPlan:
    """Build the reduction plan for top-level ``case`` with bound ``z`` and hub ``u``."""
    if case not in HANDLERS:
        raise PreconditionMismatch(f"unknown case {case!r}")
    env = CaseEnv(inst.G, inst.T, oriented_decomposition(inst.T), bindings["z"])
    u = bindings.get("u")
    if u is None:
        if case == "2.5":
            return HANDLERS[case](env)
        _, Delta, _ = degree_stats(inst.G)
        u = env.deg.index(Delta)
    return HANDLERS[case](env, u)


def pad_tree_to_order(T: Tree, target: int) -> tuple[Tree, list[int]]:
    """Attach leaves to a maximum-degree vertex until ``T`` has ``target`` vertices.

    New vertices are appended, so the first ``T.order`` labels are ``T``'s.
    """
    if T.order > target:
        raise PreconditionMismatch(f"tree of order {T.order} exceeds target {target}")
    hub = max(range(T.order), key=lambda v: (T.degree(v), -v))
    new = list(range(T.order, target))
    return Tree(target, T.edges + tuple((hub, w) for w in new)), new


def _oracle(T: Tree, G: Graph) -> Embedding | None:
    return embed_backtracking(T, G)


def _complete(pe: PartialEmbedding, T: Tree, G: Graph) -> Embedding | None:
    """Place the remaining non-leaves by search, then the leaves by matching."""
    todo = [v for v in range(T.order) if pe.map[v] == UNSET and T.degree(v) > 1]
    image = list(pe.map)
    free = pe.frontier

    def pick() -> int | None:
        for v in todo:
            if image[v] == UNSET and any(image[w] != UNSET for w in bits(T.adj[v])):
                return v
        return None

    def rec(left: int, free: int) -> Embedding | None:
        if left == 0:
            cur = PartialEmbedding(pe.n, tuple(image))
            pending = pending_leaves(cur, T)
            if pending is None:
                return None
            try:
                return extend_leaves(cur, T, G, pending)
            except HallViolation:
                return None
        v = pick()
        if v is None:
            return None
        pool = free
        for w in bits(T.adj[v]):
            if image[w] != UNSET:
                pool &= G.adj[image[w]]
        for g in bits(pool):
            image[v] = g
            found = rec(left - 1, free & ~(1 << g))
            if found is not None:
                return found
        image[v] = UNSET
        return None

    return rec(len(todo), free)


def _run_branch(br: Branch, pe: PartialEmbedding, T: Tree, G: Graph) -> Embedding | None:
    ctx = ExtensionContext(G, T, pe)
    try:
        if not br.when(ctx):
            return None
        cur = pe
        for ref, g in br.swaps:
            w = ref(ExtensionContext(G, T, cur)) if callable(ref) else ref
            if w is None:
                return None
            cur = swap_image(cur, T, G, w, g)
        for v, g in br.assign:
            cur = cur.assign(T, G, v, g)
    except (NotAdjacent, IndexError):
        return None
    return _complete(cur, T, G)


def _local_search(pe: PartialEmbedding, T: Tree, G: Graph) -> tuple[Embedding | None, bool]:
    """Extend directly, else after moving one embedded vertex to a free vertex."""
    emb = _complete(pe, T, G)
    if emb is not None:
        return emb, False
    for w in pe.domain():
        for g in bits(pe.frontier):
            try:
                moved = swap_image(pe, T, G, w, g)
            except NotAdjacent:
                continue
            emb = _complete(moved, T, G)
            if emb is not None:
                return emb, True
    return None, False


def _check_plan(inst: Instance, plan: ReductionPlan) -> None:
    G, T = inst.G, inst.T
    D = plan.deleted_set
    if len(D) != len(plan.deleted_vertices) or any(not 0 <= v < G.n for v in D):
        raise PreconditionMismatch(f"{plan.label}: roles must bind distinct existing vertices")
    for a, b in plan.deleted_edges:
        if a in D or b in D or not G.has_edge(a, b):
            raise PreconditionMismatch(f"{plan.label}: deleted edge ({a}, {b}) is not in G - D")
    if T.order - len(plan.removed_tree) > plan.sub_order:
        raise PreconditionMismatch(f"{plan.label}: pruned tree exceeds the reduced order")
    if plan.label not in REGISTRY:
        raise PreconditionMismatch(f"unregistered case {plan.label!r}")


def execute_reduction(inst: Instance, plan: ReductionPlan, strict: bool = True,
                      trace: CaseTrace | None = None, depth: int = 0
                      ) -> tuple[Embedding, CaseTrace]:
    """Recurse on ``(G', T')``, pull back, and run the plan's extension script."""
    _check_plan(inst, plan)
    trace = trace if trace is not None else CaseTrace()
    G, T = inst.G, inst.T
    G1, kept = delete_vertices(G, plan.deleted_set)
    pos = {g: i for i, g in enumerate(kept)}
    G1 = delete_edges(G1, [(pos[a], pos[b]) for a, b in plan.deleted_edges])
    tverts = [v for v in range(T.order) if v not in plan.removed_tree]
    T1 = T.induced(tverts)

    sub = None
    sub_inst = Instance(G1, pad_tree_to_order(T1, plan.sub_order)[0])
    if sub_inst.avedeg_ok and sub_inst.k_ge_n_minus_4 and G1.n < G.n:
        step = trace.add("recurse", n=G1.n, k=sub_inst.k)
        emb1, step.sub = embed_constructive(sub_inst, strict=strict, _depth=depth + 1)
        sub = emb1.map[:T1.order]
    else:
        trace.event("hypothesis-miss", plan.label, n=G1.n, k=sub_inst.k,
                    avedeg=str(avedeg(G1)))
        trace.add("recurse-oracle", n=G1.n, k=T1.order)
        emb1 = _oracle(T1, G1)
        if emb1 is not None:
            sub = emb1.map

    result: Embedding | None = None
    final = None
    if sub is not None:
        m = [UNSET] * T.order
        for i, v in enumerate(tverts):
            m[v] = kept[sub[i]]
        pe = PartialEmbedding(G.n, tuple(m))
        for br in plan.extension:
            result = _run_branch(br, pe, T, G)
            if result is not None:
                trace.add("branch", which=br.label)
                final = "swap+extend" if br.swaps else "extend"
                break
        if result is None:
            result, swapped = _local_search(pe, T, G)
            if result is not None:
                if plan.extension:
                    easy = REGISTRY[plan.label].easy_rest
                    trace.event("easy-completion" if easy else "script-miss", plan.label)
                trace.add("local-search")
                final = "swap+extend" if swapped else "extend"

    if result is None:
        oracle = _oracle(T, G)
        if oracle is None:
            raise Infeasible(f"{plan.label}: no embedding exists")
        kind = "open-fallback" if plan.open_flag else "proof-gap"
        trace.event(kind, plan.label, variant=plan.variant)
        if strict and not plan.open_flag:
            raise ProofGap(plan.label, "extension failed but an embedding exists", trace)
        trace.fallback = True
        result, final = oracle, "fallback-oracle"

    ok, why = validate_embedding(T, G, result.map)
    if not ok:
        raise AssertionError(f"{plan.label}: invalid embedding ({why})")
    trace.add(final)
    return result, trace


def _base(inst: Instance, trace: CaseTrace, label: str) -> tuple[Embedding, CaseTrace]:
    trace.add(label)
    emb = _oracle(inst.T, inst.G)
    if emb is None:
        raise Infeasible(f"{label}: no embedding exists")
    trace.fallback = True
    trace.add("fallback-oracle")
    return emb, trace


def embed_constructive(inst: Instance, strict: bool = True, _depth: int = 0
                       ) -> tuple[Embedding, CaseTrace]:
    """Embed ``T`` into ``G`` by the case analysis, returning the audit trace.

    With ``strict`` a failed extension outside the open handlers raises
    :class:`ProofGap`; otherwise it is recorded and the oracle's embedding used.
    """
    if not inst.avedeg_ok or not inst.k_ge_n_minus_4:
        raise PreconditionMismatch("needs avedeg(G) > k-2 and k >= n-4")
    trace = CaseTrace()
    k = inst.k
    if k <= 8:
        emb, trace = _base(inst, trace, "base: k≤8")
    elif tree_diameter(inst.T) <= 4:
        emb, trace = _base(inst, trace, "base: D(T)≤4")
    elif k >= inst.G.n - 3:
        emb, trace = _base(inst, trace, "base: k≥n−3")
    else:
        peeled, steps, kept = peel_low_degree(inst)
        for s in steps:
            trace.add(s)
        if steps:
            sub, trace = _base(peeled, trace, "base: k≥n−3")
            emb = Embedding(tuple(kept[g] for g in sub.map))
        else:
            emb = _reduce(inst, trace, strict, _depth)
    ok, why = validate_embedding(inst.T, inst.G, emb.map)
    if not ok:
        raise AssertionError(f"constructive embedding invalid: {why}")
    return emb, trace


def _reduce(inst: Instance, trace: CaseTrace, strict: bool, depth: int) -> Embedding:
    z = select_z(inst.G, inst.k)
    if z is None:
        return _base(inst, trace, "base: δ≥k−4")[0]
    case = dispatch_delta_case(inst, z)
    offset = {v: k for k, v in CASE_BY_OFFSET.items()}[case]
    trace.add("Δ=k" + (f"+{offset}" if offset > 0 else "−1" if offset < 0 else ""), z=z)
    try:
        plan = apply_case(inst, case, {"z": z})
    except Uncovered as exc:
        trace.add("§" + exc.label, uncovered=exc.detail)
        trace.event("uncovered", exc.label, detail=exc.detail)
        if strict:
            raise ProofGap(exc.label, f"no subcase applies: {exc.detail}", trace) from None
        return _base(inst, trace, "uncovered")[0]
    info = {**dict(plan.bindings)}
    if plan.variant:
        info["variant"] = plan.variant
    if plan.via:
        info["via"] = list(plan.via)
    trace.add("§" + plan.label, **info)
    emb, _ = execute_reduction(inst, plan, strict=strict, trace=trace, depth=depth)
    return emb
