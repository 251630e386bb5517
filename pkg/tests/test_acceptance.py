"""Acceptance criteria, one test per criterion at its stated tolerance."""

from __future__ import annotations

import json
import subprocess
import sys
import time

import pytest

from erdos_sos import harness
from erdos_sos.constructive import REGISTRY
from erdos_sos.enumeration.graphs import all_graphs_upto_iso
from erdos_sos.enumeration.oracles import free_tree_count_prufer, graph_class_count_bruteforce
from erdos_sos.enumeration.trees import all_free_trees
from erdos_sos.graph import complete_graph
from erdos_sos.graph6 import encode
from erdos_sos.harness import RunConfig
from erdos_sos.ledger import load_corpus, symbolic_verdict, verify_all


@pytest.fixture(scope="module")
def exhaustive_8():
    started = time.perf_counter()
    report = harness.verify_exhaustive(RunConfig(mode="exhaustive", n=8))
    return report, time.perf_counter() - started


def test_criterion_1_exhaustive_sweep_n_le_8(exhaustive_8):
    report, elapsed = exhaustive_8
    assert report["totals"]["counterexamples"] == 0
    # every qualifying (graph class, tree) pair was checked
    trees = {k: sum(1 for _ in all_free_trees(k)) for k in range(2, 9)}
    expected = sum(
        trees[k]
        for n in range(1, 9)
        for G in all_graphs_upto_iso(n)
        for k in range(max(2, n - 4), n + 1)
        if 2 * G.m > (k - 2) * n
    )
    assert report["totals"]["pairs"] == expected
    assert elapsed < 300


def test_criterion_2_tightness_at_threshold():
    report = harness.verify_exhaustive(
        RunConfig(mode="exhaustive", n=7, threshold="k-2", max_failures=10**6))
    assert report["totals"]["counterexamples"] > 0
    for k in range(3, 9):
        clique = encode(complete_graph(k - 1))
        assert any(f["k"] == k and f["graph6"] == clique for f in report["failures"]), k


def test_criterion_3_erdos_gallai_paths(exhaustive_8):
    report, _ = exhaustive_8
    expected = sum(1 for n in range(1, 9) for G in all_graphs_upto_iso(n)
                   for k in range(1, n + 1) if 2 * G.m > (k - 2) * n)
    assert report["totals"]["path_checks"] == expected
    assert report["totals"]["path_exceptions"] == 0


def test_criterion_4_constructive_engine_k_9_to_11():
    started = time.perf_counter()
    report = harness.verify_random(RunConfig(k_lo=9, k_hi=11, samples=10_000, seed=20261014))
    elapsed = time.perf_counter() - started
    totals = report["totals"]
    assert totals["instances"] == 30_000
    assert totals["embeddings"] == totals["instances"]
    assert totals["failures"] == 0 and totals["counterexamples"] == 0
    gaps = report["events"].get("proof-gap", {})
    assert totals["proof_gaps"] == 0
    assert not [label for label in gaps if not REGISTRY[label].open_flag]
    assert "uncovered" not in report["events"]
    cov = report["coverage"]
    assert all(cov["delta"][d] > 0 for d in harness.DELTA_BRANCHES)
    assert cov["covered"] >= 0.8 * cov["registered"]
    assert elapsed < 600


def test_criterion_5_ledger_chains():
    started = time.perf_counter()
    report = verify_all(10_000)
    elapsed = time.perf_counter() - started
    assert report["all_hold"] and not report["failures"]
    assert all(symbolic_verdict(ci) for ci in load_corpus())
    assert elapsed < 5


def test_criterion_6_enumeration_counts():
    for k in range(4, 11):
        assert sum(1 for _ in all_free_trees(k)) == free_tree_count_prufer(k)
    assert sum(1 for _ in all_free_trees(9)) == 47
    for n in range(1, 7):
        assert sum(1 for _ in all_graphs_upto_iso(n)) == graph_class_count_bruteforce(n)
    assert sum(1 for _ in all_graphs_upto_iso(5)) == 34


def _cli_report(jobs: int) -> dict:
    argv = [sys.executable, "-m", "erdos_sos.cli", "verify", "--k", "9", "--samples", "1000",
            "--seed", "7", "--jobs", str(jobs), "--json"]
    proc = subprocess.run(argv, capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_criterion_7_reports_independent_of_jobs():
    one, eight = _cli_report(1), _cli_report(8)
    assert one["timing"]["jobs"] == 1 and eight["timing"]["jobs"] == 8
    assert harness.strip_timing(one) == harness.strip_timing(eight)
