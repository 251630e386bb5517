from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from erdos_sos.constructive import REGISTRY
from erdos_sos.errors import EmptyRange, ParseError
from erdos_sos.ledger import (Poly, baseline, load_corpus, parse_corpus, parse_linear,
                              positive_from, symbolic_verdict, verify_all, verify_inequality)
from erdos_sos.ledger.check import step_one, step_two
from erdos_sos.ledger.poly import nonnegative_from

CORPUS = load_corpus()


def _entry(case_id: str, note: str | None = None):
    return next(ci for ci in CORPUS if ci.case_id == case_id and (note is None or ci.note == note))


def test_case_2_1_at_k_9():
    ci = _entry("2.1")
    assert baseline(9) == 46
    assert baseline(9) - ci.removed_total(9) + ci.added_back == 46 - 12 - 4 + 1 == 31
    assert ci.claimed_lower(9) == Fraction(61, 2)
    assert step_one(ci, 9) and step_two(ci, 9)


def test_case_2_1_step_two_symbolic():
    ci = _entry("2.1")
    diff = ci.claimed_lower.twice - ci.claimed_avedeg_exceeds * ci.n_prime
    assert diff == Poly.of(6)
    assert symbolic_verdict(ci)


def test_case_2_4_1_symbolic():
    ci = _entry("2.4.1")
    assert ci.claimed_lower.twice - ci.claimed_avedeg_exceeds * ci.n_prime == Poly.of(1)
    assert verify_inequality(ci, range(9, 100)).holds


def test_corrupted_entry_fails_at_first_k():
    bad = replace(_entry("2.1"), added_back=_entry("2.1").added_back - 10)
    v = verify_inequality(bad, range(9, 50))
    assert not v.holds and not v.symbolic
    assert v.first_bad_k == 9 and v.failed_step == "edge count"


def test_empty_ranges():
    ci = _entry("2.1")
    with pytest.raises(EmptyRange):
        verify_inequality(ci, range(9, 9))
    with pytest.raises(EmptyRange):
        verify_inequality(ci, range(8, 20))
    with pytest.raises(EmptyRange):
        verify_all(8)


def test_full_corpus():
    report = verify_all(10000)
    assert report["schema"] == 1
    assert report["all_hold"] and report["failures"] == []
    assert report["count"] == len(CORPUS) == 49


def test_corpus_ids_are_registered_cases():
    assert {ci.case_id for ci in CORPUS} <= set(REGISTRY)


def test_flagged_corrections():
    flagged = {(v["case_id"], v["note"]) for v in verify_all(50)["entries"] if v["flags"]}
    assert len(flagged) == 5
    for cid in ("2.3.1(A.2)(a)", "2.3.1(B.2)(a)"):
        entries = [ci for ci in CORPUS if ci.case_id == cid and ci.added_back > ci.justified]
        assert entries
        assert all(not verify_inequality(ci, range(9, 20)).justified_holds for ci in entries)


@pytest.mark.parametrize("ci", CORPUS, ids=lambda ci: f"{ci.case_id}@{ci.line}")
def test_sweep_and_symbolic_agree(ci):
    sweep = all(step_one(ci, k) and step_two(ci, k) for k in range(9, 400))
    assert sweep == symbolic_verdict(ci) == verify_inequality(ci, range(9, 400)).holds


def test_parse_linear_forms():
    assert parse_linear("k+3") == Poly.of(3, 1)
    assert parse_linear("2k-3") == Poly.of(-3, 2)
    assert parse_linear("2(k+1)") == Poly.of(2, 2)
    assert parse_linear("-1") == Poly.of(-1)
    with pytest.raises(ParseError) as exc:
        parse_linear("k+*")
    assert exc.value.column == 2


def test_corpus_parse_errors_name_the_line():
    text = "# header\n2.1 | k+3, k-5 | 1 | k+2 | 1,-2,-2 | k+2 | > k-4\n2.1 | k+3 | x | k | 1,2\n"
    with pytest.raises(ParseError) as exc:
        parse_corpus(text)
    assert exc.value.line == 3
    assert len(parse_corpus(text.splitlines(keepends=True)[1])) == 1


def test_seven_field_records_default_the_extras():
    (ci,) = parse_corpus("2.1 | k+3, k-5 | 1 | k+2 | 1,-2,-2 | k+2 | > k-4")
    assert ci.justified == 1 and ci.note == ""


coef = st.integers(-60, 60)


@given(st.integers(0, 3), coef, coef, st.integers(-20, 30), st.sampled_from([None, 0, 1]))
def test_positive_from_matches_evaluation(a, b, c, k0, parity):
    p = Poly.of(c, b, a)
    ks = [k for k in range(k0, k0 + 400) if parity is None or k % 2 == parity]
    assert positive_from(p, k0, parity) == all(p(k) > 0 for k in ks)
    assert nonnegative_from(p, k0, parity) == all(p(k) >= 0 for k in ks)


@given(st.integers(-3, -1), coef, coef, st.integers(0, 30))
def test_negative_leading_coefficient_is_never_positive_on_a_ray(a, b, c, k0):
    assert not positive_from(Poly.of(c, b, a), k0)


@given(st.lists(coef, max_size=3), st.lists(coef, max_size=3), st.integers(-50, 50))
def test_poly_arithmetic(p, q, k):
    P, Q = Poly(tuple(p)), Poly(tuple(q))
    assert (P + Q)(k) == P(k) + Q(k)
    assert (P - Q)(k) == P(k) - Q(k)
    assert (P * Q)(k) == P(k) * Q(k)


@given(st.lists(coef, max_size=2))
def test_linear_str_round_trip(p):
    P = Poly(tuple(p))
    assert parse_linear(str(P)) == P


@given(st.integers(9, 10**6))
def test_baseline_is_least_edge_count_above_threshold(k):
    n = k + 4
    assert 2 * baseline(k) > (k - 2) * n >= 2 * (baseline(k) - 1)
