"""Command line entry point: ``erdos-sos {verify,embed,ledger,hunt}``.

Settings resolve as flags, then the ``--config`` file (flat ``key = value``
lines), then ``ERDOS_SOS_JOBS`` for the job count, then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Callable

from . import harness
from .errors import (CapExceeded, EmptyRange, ErdosSosError, Infeasible, ParseError,
                     PreconditionMismatch, ProofGap, TargetInfeasible)
from .graph6 import decode
from .enumeration.trees import parse_parents
from .ledger import load_corpus, verify_all

JOBS_ENV = "ERDOS_SOS_JOBS"

DEFAULTS: dict[str, Any] = {
    "n": None, "k": None, "samples": 1000, "seed": 0, "jobs": 1, "profile": "mixed",
    "threshold_at": None, "max_failures": 50, "kmax": 10000, "target_case": None,
    "engine": "oracle",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(harness.EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_k_range(text: str) -> tuple[int, int]:
    """``"9"`` or ``"9..11"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}") from None


def _threshold(text: str) -> str:
    if text != "k-2":
        raise ValueError(f"threshold-at must be 'k-2', got {text!r}")
    return text


CONVERTERS: dict[str, Callable[[str], Any]] = {
    "n": int, "k": parse_k_range, "samples": int, "seed": int, "jobs": int, "profile": str,
    "threshold_at": _threshold, "max_failures": int, "kmax": int, "target_case": str, "engine": str,
}


def read_config(path: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for i, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected key = value", line=i)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise ParseError(f"unknown setting {key!r}", line=i)
        try:
            out[key] = CONVERTERS[key](value)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ParseError(str(exc), line=i) from None
    return out


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    config = read_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            out[key] = flag
        elif key in config:
            out[key] = config[key]
        elif key == "jobs" and os.environ.get(JOBS_ENV):
            out[key] = int(os.environ[JOBS_ENV])
        else:
            out[key] = default
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value settings file")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    p.add_argument("--report", help="also write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="erdos-sos", description="Erdős–Sós verification toolkit for n <= k+4.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check graphs against every tree of order k")
    v.add_argument("--n", type=int, help="graph order (exhaustive: largest order swept)")
    v.add_argument("--k", type=parse_k_range, help="tree order or range a..b")
    v.add_argument("--exhaustive", action="store_true", help="all graph classes up to order n")
    v.add_argument("--samples", type=int, help="random instances per k")
    v.add_argument("--seed", type=int)
    v.add_argument("--jobs", type=int)
    v.add_argument("--profile", help="random instance profile (default mixed)")
    v.add_argument("--threshold-at", dest="threshold_at", choices=["k-2"],
                   help="accept avedeg equal to k-2 (tightness check)")
    v.add_argument("--max-failures", dest="max_failures", type=int)
    _common(v)

    e = sub.add_parser("embed", help="embed one tree into one graph")
    e.add_argument("graph", help="graph6 string or a file whose first line is one")
    e.add_argument("tree", help="parent array (quoted) or a file of parent-array lines")
    e.add_argument("--engine", choices=["oracle", "constructive"])
    e.add_argument("--config")
    e.add_argument("--json", action="store_true")

    g = sub.add_parser("ledger", help="check the transcribed edge-count chains")
    g.add_argument("--kmax", type=int)
    g.add_argument("--corpus", help="alternative corpus file")
    _common(g)

    h = sub.add_parser("hunt", help="oversample subcases and tabulate fallbacks")
    h.add_argument("--k", type=parse_k_range)
    h.add_argument("--n", type=int)
    h.add_argument("--samples", type=int)
    h.add_argument("--seed", type=int)
    h.add_argument("--jobs", type=int)
    h.add_argument("--target-case", dest="target_case")
    h.add_argument("--max-failures", dest="max_failures", type=int)
    _common(h)
    return parser


def _emit(report: dict, args: argparse.Namespace, summary: Callable[[dict], str]) -> None:
    text = harness.dumps(report)
    if getattr(args, "report", None):
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    print(text if args.json else summary(report))


def _run_config(command: str, s: dict[str, Any], exhaustive: bool = False) -> harness.RunConfig:
    k_lo, k_hi = s["k"] if s["k"] is not None else (None, None)
    if command == "hunt" and k_lo is None:
        k_lo = k_hi = 9
    return harness.RunConfig(
        command=command, mode="exhaustive" if exhaustive else "random", n=s["n"],
        k_lo=k_lo, k_hi=k_hi, seed=s["seed"], samples=s["samples"], jobs=max(1, s["jobs"]),
        profile=s["profile"], threshold="k-2" if s["threshold_at"] else "strict",
        target_case=s["target_case"], max_failures=s["max_failures"],
    )


def _verify_summary(r: dict) -> str:
    t = r["totals"]
    lines = [f"{key}: {value}" for key, value in t.items()]
    if "coverage" in r:
        c = r["coverage"]
        lines.append(f"coverage: {c['covered']}/{c['registered']} subcase labels")
        lines.append("delta branches: " + ", ".join(f"{d} {n}" for d, n in c["delta"].items()))
        if c["missing"]:
            lines.append("never reached: " + ", ".join(c["missing"]))
    if r.get("counterexamples_by_k"):
        lines.append("counterexamples by k: " + ", ".join(
            f"k={k}: {n}" for k, n in r["counterexamples_by_k"].items()))
    return "\n".join(lines)


def cmd_verify(args: argparse.Namespace) -> int:
    s = resolve(args)
    cfg = _run_config("verify", s, exhaustive=args.exhaustive)
    report = harness.verify_exhaustive(cfg) if args.exhaustive else harness.verify_random(cfg)
    _emit(report, args, _verify_summary)
    return harness.exit_code(report)


def _read_text_arg(value: str) -> tuple[str, bool]:
    path = Path(value)
    if path.is_file():
        return path.read_text(encoding="utf-8"), True
    return value, False


def cmd_embed(args: argparse.Namespace) -> int:
    s = resolve(args)
    gtext, _ = _read_text_arg(args.graph)
    glines = [ln for ln in gtext.splitlines() if ln.strip()]
    if not glines:
        raise ParseError("no graph6 line found", line=1)
    G = decode(glines[0].strip(), line=1)
    ttext, from_file = _read_text_arg(args.tree)
    tlines = [(i, ln) for i, ln in enumerate(ttext.splitlines(), start=1) if ln.strip()]
    if not tlines:
        raise ParseError("no parent-array line found", line=1)
    T = parse_parents(tlines[0][1], tlines[0][0] if from_file else None)
    mapping, trace = harness.embed_instance(G, T, s["engine"])
    if args.json:
        print(json.dumps({"found": mapping is not None, "map": mapping,
                          "trace": trace.to_json() if trace else None},
                         sort_keys=True, ensure_ascii=False))
    elif mapping is None:
        print("no embedding")
    else:
        for v, g in enumerate(mapping):
            print(f"{v} -> {g}")
        if trace is not None:
            print("trace: " + " > ".join(trace.labels()))
            print(json.dumps(trace.to_json(), ensure_ascii=False))
    return harness.EXIT_OK if mapping is not None else harness.EXIT_NONE


def _ledger_summary(r: dict) -> str:
    lines = []
    for e in r["entries"]:
        status = "PASS" if e["holds"] else f"FAIL at k={e['first_bad_k']} ({e['failed_step']})"
        note = f"  [{'; '.join(e['flags'])}]" if e["flags"] else ""
        lines.append(f"{status:<6} {e['case_id']:<22} line {e['line']}{note}")
    lines.append(f"{r['count']} chains over {r['cases']} cases, k in [{r['k_min']}, {r['k_max']}]: "
                 f"{'all hold' if r['all_hold'] else str(len(r['failures'])) + ' failing'}, "
                 f"{r['flagged']} flagged")
    return "\n".join(lines)


def cmd_ledger(args: argparse.Namespace) -> int:
    s = resolve(args)
    corpus = load_corpus(args.corpus) if args.corpus else None
    report = verify_all(s["kmax"], corpus)
    _emit(report, args, _ledger_summary)
    return harness.EXIT_OK if report["all_hold"] else harness.EXIT_COUNTEREXAMPLE


def _hunt_summary(r: dict) -> str:
    lines = [f"{key}: {value}" for key, value in r["totals"].items()]
    for label, row in r["subcases"].items():
        if row["hits"] or row["open"]:
            tag = " OPEN" if row["open"] else ""
            lines.append(f"{label:<22}{tag:<5} hits {row['hits']:>6}  fallback {row['fallback_rate']}"
                         f"  script-miss {row['script_miss']}")
    return "\n".join(lines)


def cmd_hunt(args: argparse.Namespace) -> int:
    s = resolve(args)
    report = harness.hunt(_run_config("hunt", s))
    _emit(report, args, _hunt_summary)
    return harness.EXIT_OK


COMMANDS = {"verify": cmd_verify, "embed": cmd_embed, "ledger": cmd_ledger, "hunt": cmd_hunt}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ProofGap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_PROOF_GAP
    except Infeasible as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return harness.EXIT_COUNTEREXAMPLE
    except (ParseError, EmptyRange, CapExceeded, TargetInfeasible, PreconditionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_USAGE
    except (ErdosSosError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return harness.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
