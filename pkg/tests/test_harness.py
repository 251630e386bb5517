from __future__ import annotations

import pytest

from erdos_sos import harness
from erdos_sos.errors import CapExceeded, EmptyRange, TargetInfeasible
from erdos_sos.graph import build_graph, complete_graph
from erdos_sos.graph6 import encode
from erdos_sos.harness import RunConfig


def test_random_reports_are_identical_across_job_counts():
    a = harness.verify_random(RunConfig(k_lo=9, samples=60, seed=7, jobs=1))
    b = harness.verify_random(RunConfig(k_lo=9, samples=60, seed=7, jobs=3))
    assert harness.strip_timing(a) == harness.strip_timing(b)
    assert harness.dumps(harness.strip_timing(a)) == harness.dumps(harness.strip_timing(b))
    assert a["schema"] == 1 and "jobs" not in a["config"]
    assert b["timing"]["jobs"] == 3


def test_random_report_totals():
    r = harness.verify_random(RunConfig(k_lo=9, k_hi=10, samples=40, seed=1))
    t = r["totals"]
    assert t["instances"] == t["embeddings"] == 80
    assert t["proof_gaps"] == t["counterexamples"] == t["failures"] == 0
    assert set(r["coverage"]["delta"]) == set(harness.DELTA_BRANCHES)
    assert harness.exit_code(r) == harness.EXIT_OK


def test_random_mode_domain():
    with pytest.raises(TargetInfeasible):
        harness.verify_random(RunConfig(k_lo=9, n=12))
    with pytest.raises(EmptyRange):
        harness.verify_random(RunConfig(k_lo=8))
    with pytest.raises(EmptyRange):
        harness.verify_random(RunConfig(k_lo=10, k_hi=9))


def test_exhaustive_small_orders():
    r = harness.verify_exhaustive(RunConfig(mode="exhaustive", n=6))
    assert r["totals"]["graphs"] == 1 + 2 + 4 + 11 + 34 + 156
    assert r["totals"]["counterexamples"] == 0 and r["totals"]["path_exceptions"] == 0
    assert harness.exit_code(r) == harness.EXIT_OK
    with pytest.raises(CapExceeded):
        harness.verify_exhaustive(RunConfig(mode="exhaustive", n=10))


def test_relaxed_threshold_exposes_complete_graphs():
    r = harness.verify_exhaustive(RunConfig(mode="exhaustive", n=5, threshold="k-2",
                                            max_failures=10**6))
    assert harness.exit_code(r) == harness.EXIT_COUNTEREXAMPLE
    for k in (3, 4, 5, 6):
        clique = encode(complete_graph(k - 1))
        assert any(f["graph6"] == clique for f in r["failures"] if f["k"] == k)


def test_meets_threshold():
    C4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert not harness.meets_threshold(C4, 4, "strict")
    assert harness.meets_threshold(C4, 4, "k-2")
    assert harness.meets_threshold(C4, 3, "strict")


def test_k_window_reaches_one_past_n():
    assert list(harness.k_window(8)) == [4, 5, 6, 7, 8, 9]
    assert list(harness.k_window(3)) == [2, 3, 4]


def test_resolve_case():
    assert harness.resolve_case("2.5.2D") == "2.5.2(D)"
    assert harness.resolve_case("§2.2.2(B.2)(e.2)") == "2.2.2(B.2)(e.2)"
    with pytest.raises(EmptyRange):
        harness.resolve_case("9.9")


def test_hunt_target_and_empty():
    r = harness.hunt(RunConfig(command="hunt", k_lo=9, samples=40, seed=3, target_case="2.5.2D"))
    assert list(r["subcases"]) == ["2.5.2(D)"]
    row = r["subcases"]["2.5.2(D)"]
    assert row["open"] and row["fallback_rate"] == f"{row['open_fallback']}/{row['hits']}"
    assert harness.exit_code(r) == harness.EXIT_OK
    empty = harness.hunt(RunConfig(command="hunt", k_lo=9, samples=0))
    assert empty["subcases"] == {} and empty["totals"]["instances"] == 0
    assert harness.exit_code(empty) == harness.EXIT_OK


def test_exit_code_mapping():
    def rep(command, **totals):
        return {"command": command, "totals": totals}

    assert harness.exit_code(rep("verify", counterexamples=1, proof_gaps=1)) == 2
    assert harness.exit_code(rep("verify", proof_gaps=1)) == 3
    assert harness.exit_code(rep("verify", failures=1)) == 3
    assert harness.exit_code(rep("verify", path_exceptions=1)) == 2
    assert harness.exit_code(rep("hunt", proof_gaps=4)) == 0
