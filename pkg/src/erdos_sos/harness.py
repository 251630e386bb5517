"""Run drivers behind the CLI: sweeps, random verification and gap hunting.

Work is split into contiguous index shards, processed in worker
processes and concatenated in index order, so a report never depends on
the number of jobs. Everything that varies between runs lives in the
``timing`` block.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any, Callable, Sequence

from .constructive import REGISTRY, CaseTrace, Instance, embed_constructive
from .embed import contains_path, embed_backtracking, validate_embedding
from .enumeration.graphs import MAX_ENUM_ORDER, all_graphs_upto_iso
from .enumeration.random import random_instance
from .enumeration.trees import all_free_trees, format_parents
from .errors import CapExceeded, EmptyRange, Infeasible, ProofGap, TargetInfeasible
from .graph import Graph
from .graph6 import decode, encode

SCHEMA = 1
EXIT_OK, EXIT_NONE, EXIT_COUNTEREXAMPLE, EXIT_PROOF_GAP, EXIT_USAGE = 0, 1, 2, 3, 4
DELTA_BRANCHES = ("Δ=k+3", "Δ=k+2", "Δ=k+1", "Δ=k", "Δ=k−1")


@dataclass
class RunConfig:
    command: str = "verify"
    mode: str = "random"
    n: int | None = None
    k_lo: int | None = None
    k_hi: int | None = None
    seed: int = 0
    samples: int = 1000
    jobs: int = 1
    profile: str = "mixed"
    threshold: str = "strict"
    target_case: str | None = None
    max_failures: int = 50

    def echo(self) -> dict:
        # jobs changes how work is spread, never what is computed
        out = asdict(self)
        del out["jobs"]
        return out


def payload(G: Graph, T, **extra) -> dict:
    """Everything needed to re-run one instance: graph6 plus a parent array."""
    return {"graph6": encode(G), "tree": format_parents(T), "n": G.n, "k": T.order, **extra}


def meets_threshold(G: Graph, k: int, threshold: str) -> bool:
    lhs, rhs = 2 * G.m, (k - 2) * G.n
    return lhs > rhs if threshold == "strict" else lhs >= rhs


def _shards(count: int, jobs: int) -> list[tuple[int, int]]:
    if count <= 0:
        return []
    pieces = max(1, min(count, jobs * 4))
    edges = [count * i // pieces for i in range(pieces + 1)]
    return [(edges[i], edges[i + 1]) for i in range(pieces) if edges[i] < edges[i + 1]]


def run_sharded(fn: Callable, tasks: Sequence, jobs: int) -> list:
    """``fn`` over ``tasks`` in order; each result is a list, concatenated."""
    if jobs <= 1 or len(tasks) <= 1:
        parts = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(fn, tasks))
    return [rec for part in parts for rec in part]


def _walk(trace: CaseTrace):
    for step in trace.steps:
        yield step.label
        if step.sub is not None:
            yield from _walk(step.sub)


# random instances (n = k+4) --------------------------------------------

def _check_random(n: int, k: int, seed: int, index: int, profile: str, strict: bool) -> dict:
    """Constructive engine plus oracle on one generated instance."""
    inst = random_instance(n, k, seed, index, profile=profile)
    G, T = inst.G, inst.T
    rec: dict[str, Any] = {"index": index, "k": k, "embedded": False, "fallback": False,
                           "proof_gap": None, "counterexample": False, "failure": None}
    trace = None
    try:
        emb, trace = embed_constructive(inst, strict=strict)
        ok, why = validate_embedding(T, G, emb)
        if not ok:
            rec["failure"] = payload(G, T, kind="invalid-embedding", index=index, detail=why)
        rec["embedded"] = ok
    except ProofGap as gap:
        trace = gap.trace
        rec["proof_gap"] = gap.label
        rec["failure"] = payload(G, T, kind="proof-gap", index=index, label=gap.label,
                                 detail=gap.detail)
    except Infeasible as exc:
        rec["failure"] = payload(G, T, kind="infeasible", index=index, detail=str(exc))
    oracle = embed_backtracking(T, G)
    if oracle is None:
        rec["counterexample"] = True
        rec["failure"] = payload(G, T, kind="counterexample", index=index)
    elif rec["proof_gap"] is None and not rec["embedded"] and rec["failure"] is None:
        rec["failure"] = payload(G, T, kind="engine-miss", index=index)
    if trace is not None:
        rec["fallback"] = trace.fallback
        rec["cases"] = trace.case_labels()
        rec["deltas"] = [s for s in _walk(trace) if s.startswith("Δ=")]
        rec["events"] = [(e["kind"], e["label"]) for e in trace.all_events()]
    else:
        rec["cases"], rec["deltas"], rec["events"] = [], [], []
    return rec


def _random_shard(task) -> list[dict]:
    n, k, seed, lo, hi, profile, strict = task
    return [_check_random(n, k, seed, i, profile, strict) for i in range(lo, hi)]


def _coverage(records: list[dict]) -> dict:
    cases = Counter(label for r in records for label in r["cases"])
    deltas = Counter(d for r in records for d in r["deltas"])
    covered = sorted(label for label in REGISTRY if cases.get(label))
    return {
        "delta": {d: deltas.get(d, 0) for d in DELTA_BRANCHES},
        "cases": {label: cases.get(label, 0) for label in REGISTRY},
        "registered": len(REGISTRY),
        "covered": len(covered),
        "missing": [label for label in REGISTRY if not cases.get(label)],
    }


def _events(records: list[dict]) -> dict:
    table: dict[str, Counter] = defaultdict(Counter)
    for r in records:
        for kind, label in r["events"]:
            table[kind][label or "-"] += 1
    return {kind: dict(sorted(c.items())) for kind, c in sorted(table.items())}


def _k_values(cfg: RunConfig) -> list[int]:
    if cfg.k_lo is None:
        raise EmptyRange("random mode needs --k")
    hi = cfg.k_lo if cfg.k_hi is None else cfg.k_hi
    if hi < cfg.k_lo:
        raise EmptyRange(f"empty k range {cfg.k_lo}..{hi}")
    ks = list(range(cfg.k_lo, hi + 1))
    for k in ks:
        n = k + 4 if cfg.n is None else cfg.n
        if n != k + 4:
            raise TargetInfeasible("random mode draws instances with n = k+4")
        if k < 9:
            raise EmptyRange("random mode needs k >= 9")
    return ks


def _random_records(cfg: RunConfig, profile: str, strict: bool) -> list[dict]:
    records = []
    for k in _k_values(cfg):
        tasks = [(k + 4, k, cfg.seed, lo, hi, profile, strict)
                 for lo, hi in _shards(cfg.samples, cfg.jobs)]
        records.extend(run_sharded(_random_shard, tasks, cfg.jobs))
    return records


def _finish(cfg: RunConfig, body: dict, started: float) -> dict:
    report = {"schema": SCHEMA, "command": cfg.command, "config": cfg.echo(), **body}
    report["timing"] = {
        "wall_seconds": round(time.perf_counter() - started, 3),
        "jobs": cfg.jobs,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    return report


def verify_random(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    records = _random_records(cfg, cfg.profile, strict=True)
    failures = [r["failure"] for r in records if r["failure"] is not None]
    totals = {
        "instances": len(records),
        "embeddings": sum(r["embedded"] for r in records),
        "fallbacks": sum(r["fallback"] for r in records),
        "proof_gaps": sum(r["proof_gap"] is not None for r in records),
        "counterexamples": sum(r["counterexample"] for r in records),
        "failures": len(failures),
    }
    body = {"totals": totals, "coverage": _coverage(records), "events": _events(records),
            "failures": failures[: cfg.max_failures]}
    return _finish(cfg, body, started)


# exhaustive sweep ---------------------------------------------------------

def k_window(n: int) -> range:
    """Tree orders paired with graphs of order ``n``; ``n+1`` exposes tightness."""
    return range(max(2, n - 4), n + 2)


def _exhaustive_shard(task) -> list[dict]:
    n, codes, ks, threshold = task
    out = []
    for code in codes:
        G = decode(code)
        rec = {"n": n, "pairs": 0, "counterexamples": [], "paths": 0, "path_exceptions": []}
        for k in ks:
            if not meets_threshold(G, k, threshold):
                continue
            for T in all_free_trees(k):
                rec["pairs"] += 1
                if embed_backtracking(T, G) is None:
                    rec["counterexamples"].append(payload(G, T, kind="counterexample"))
        for k in range(1, n + 1):
            if meets_threshold(G, k, threshold):
                rec["paths"] += 1
                if not contains_path(G, k):
                    rec["path_exceptions"].append({"graph6": code, "k": k})
        out.append(rec)
    return out


def verify_exhaustive(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    n_max = cfg.n
    if n_max is None or not 1 <= n_max <= MAX_ENUM_ORDER:
        raise CapExceeded(f"exhaustive mode needs 1 <= n <= {MAX_ENUM_ORDER}")
    records = []
    for n in range(1, n_max + 1):
        ks = [k for k in k_window(n)
              if (cfg.k_lo is None or k >= cfg.k_lo) and (cfg.k_hi is None or k <= cfg.k_hi)]
        codes = [encode(G) for G in all_graphs_upto_iso(n)]
        tasks = [(n, codes[lo:hi], ks, cfg.threshold) for lo, hi in _shards(len(codes), cfg.jobs)]
        records.extend(run_sharded(_exhaustive_shard, tasks, cfg.jobs))
    cex = [c for r in records for c in r["counterexamples"]]
    by_k = Counter(c["k"] for c in cex)
    path_ex = [p for r in records for p in r["path_exceptions"]]
    totals = {
        "graphs": len(records),
        "pairs": sum(r["pairs"] for r in records),
        "counterexamples": len(cex),
        "path_checks": sum(r["paths"] for r in records),
        "path_exceptions": len(path_ex),
    }
    body = {"totals": totals, "counterexamples_by_k": {str(k): by_k[k] for k in sorted(by_k)},
            "failures": cex[: cfg.max_failures], "path_failures": path_ex[: cfg.max_failures]}
    return _finish(cfg, body, started)


# gap hunting ---------------------------------------------------------------

def normalize_label(label: str) -> str:
    return re.sub(r"[^0-9A-Za-z.]", "", label).strip(".")


def resolve_case(label: str) -> str:
    want = normalize_label(label)
    for known in REGISTRY:
        if normalize_label(known) == want:
            return known
    raise EmptyRange(f"unknown case label {label!r}")


def hunt(cfg: RunConfig) -> dict:
    """Non-strict runs that record every fallback instead of stopping."""
    started = time.perf_counter()
    cfg = replace(cfg, profile="balanced")
    target = resolve_case(cfg.target_case) if cfg.target_case else None
    records = _random_records(cfg, cfg.profile, strict=False) if cfg.samples > 0 else []
    per: dict[str, Counter] = defaultdict(Counter)
    for r in records:
        for label in set(r["cases"]):
            per[label]["hits"] += 1
        for kind, label in r["events"]:
            per[label or "-"][kind] += 1
    rows = {}
    for label in REGISTRY if records else ():
        c = per.get(label, Counter())
        hits = c.get("hits", 0)
        fallbacks = c.get("open-fallback", 0) + c.get("proof-gap", 0)
        rows[label] = {"hits": hits, "open": REGISTRY[label].open_flag,
                       "script_miss": c.get("script-miss", 0),
                       "easy_completion": c.get("easy-completion", 0),
                       "open_fallback": c.get("open-fallback", 0),
                       "proof_gaps": c.get("proof-gap", 0),
                       "fallback_rate": f"{fallbacks}/{hits}"}
    gaps_outside_open = sum(row["proof_gaps"] for row in rows.values() if not row["open"])
    totals = {
        "instances": len(records),
        "proof_gaps": sum(row["proof_gaps"] for row in rows.values()),
        "proof_gaps_outside_open": gaps_outside_open,
        "open_fallbacks": sum(row["open_fallback"] for row in rows.values()),
        "counterexamples": sum(r["counterexample"] for r in records),
    }
    body = {"totals": totals, "subcases": rows if target is None or not rows else {target: rows[target]},
            "coverage": _coverage(records) if records else None,
            "failures": [r["failure"] for r in records if r["failure"]][: cfg.max_failures]}
    if target is not None:
        body["target_case"] = target
    return _finish(cfg, body, started)


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def exit_code(report: dict) -> int:
    totals = report["totals"]
    if totals.get("counterexamples"):
        return EXIT_COUNTEREXAMPLE
    if report["command"] == "verify" and (totals.get("proof_gaps") or totals.get("failures")):
        return EXIT_PROOF_GAP
    if totals.get("path_exceptions"):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def embed_instance(G: Graph, T, engine: str) -> tuple[list[int] | None, CaseTrace | None]:
    """One embedding by the chosen engine; ``None`` when there is none."""
    if engine == "oracle":
        emb = embed_backtracking(T, G)
        return (list(emb.map) if emb is not None else None), None
    emb, trace = embed_constructive(Instance(G, T), strict=True)
    return list(emb.map), trace


__all__ = [
    "DELTA_BRANCHES", "EXIT_COUNTEREXAMPLE", "EXIT_NONE", "EXIT_OK", "EXIT_PROOF_GAP",
    "EXIT_USAGE", "RunConfig", "dumps", "embed_instance", "exit_code",
    "hunt", "k_window", "meets_threshold", "payload", "resolve_case", "run_sharded",
    "strip_timing", "verify_exhaustive", "verify_random",
]
