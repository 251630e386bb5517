"""Exact checks of the transcribed chains, per k and on the whole ray.

Everything is kept in integers by doubling: ``2 e(G)`` against
``a k^2 + b k + c``. The floor in the edge baseline is handled by
splitting on the parity of ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyRange
from .corpus import CaseInequality, load_corpus
from .poly import Poly, nonnegative_from, positive_from

SCHEMA = 1


def baseline(k: int) -> int:
    """Edge count assumed for ``G``: ``1 + floor((k-2)(k+4)/2)``."""
    return 1 + (k - 2) * (k + 4) // 2


def twice_baseline(parity: int) -> Poly:
    # (k-2)(k+4) = k^2+2k-8 is even exactly when k is even
    return Poly.of(-6 if parity == 0 else -7, 2, 1)


@dataclass
class Verdict:
    case_id: str
    note: str
    line: int
    holds: bool
    symbolic: bool
    first_bad_k: int | None
    failed_step: str | None
    relation_as_printed: bool | None
    denom_matches: bool | None
    justified_holds: bool
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "note": self.note,
            "line": self.line,
            "holds": self.holds,
            "symbolic": self.symbolic,
            "first_bad_k": self.first_bad_k,
            "failed_step": self.failed_step,
            "relation_as_printed": self.relation_as_printed,
            "denom_matches": self.denom_matches,
            "justified_holds": self.justified_holds,
            "flags": self.flags,
        }


def _step_polys(ci: CaseInequality, parity: int, correction: int) -> tuple[Poly, Poly]:
    """Differences that must be positive / nonnegative for steps (i) and (ii)."""
    B2 = ci.claimed_lower.twice
    edges = twice_baseline(parity) - 2 * ci.removed_total + 2 * correction
    return edges - B2, B2 - ci.claimed_avedeg_exceeds * ci.n_prime


def step_one(ci: CaseInequality, k: int, correction: int | None = None) -> bool:
    corr = ci.added_back if correction is None else correction
    return 2 * (baseline(k) - ci.removed_total(k) + corr) > ci.claimed_lower.twice(k)


def step_two(ci: CaseInequality, k: int) -> bool:
    # avedeg(G') > 2 bound / n' >= target; a printed '>' that is really
    # an equality still yields the strict conclusion via step (i)
    return ci.n_prime(k) > 0 and ci.claimed_lower.twice(k) >= ci.claimed_avedeg_exceeds(k) * ci.n_prime(k)


def _sweep(ci: CaseInequality, k_range: range) -> tuple[int | None, str | None]:
    """Same tests as ``step_one``/``step_two``, with coefficients hoisted."""
    r0, r1 = ci.removed_total.coeff(0), ci.removed_total.coeff(1)
    B = ci.claimed_lower
    tn = ci.claimed_avedeg_exceeds * ci.n_prime
    t0, t1, t2 = tn.coeff(0), tn.coeff(1), tn.coeff(2)
    n0, n1 = ci.n_prime.coeff(0), ci.n_prime.coeff(1)
    added = ci.added_back
    for k in k_range:
        b2 = (B.a * k + B.b) * k + B.c
        if 2 * (1 + (k - 2) * (k + 4) // 2 - r1 * k - r0 + added) <= b2:
            return k, "edge count"
        if n1 * k + n0 <= 0 or b2 < (t2 * k + t1) * k + t0:
            return k, "average degree"
    return None, None


def symbolic_verdict(ci: CaseInequality, correction: int | None = None) -> bool:
    corr = ci.added_back if correction is None else correction
    for parity in (0, 1):
        one, two = _step_polys(ci, parity, corr)
        if not positive_from(one, ci.k_min, parity) or not nonnegative_from(two, ci.k_min, parity):
            return False
    return positive_from(ci.n_prime, ci.k_min)


def _relation_as_printed(ci: CaseInequality) -> bool | None:
    if ci.denom is None:
        return None
    diff = ci.claimed_lower.twice - ci.claimed_avedeg_exceeds * ci.denom
    if ci.relation == "=":
        return not diff.coeffs
    return positive_from(diff, ci.k_min)


def _justified_holds(ci: CaseInequality) -> bool:
    # e_lb is an integer lower bound on e(G'); the conclusion needs 2 e_lb > target n'
    for parity in (0, 1):
        lb = twice_baseline(parity) - 2 * ci.removed_total + 2 * ci.justified
        if not positive_from(lb - ci.claimed_avedeg_exceeds * ci.n_prime, ci.k_min, parity):
            return False
    return True


def verify_inequality(ci: CaseInequality, k_range: range) -> Verdict:
    """Check one chain for every ``k`` in ``k_range`` and on the whole ray."""
    if len(k_range) == 0 or k_range.start < ci.k_min or k_range.step != 1:
        raise EmptyRange(f"k range {k_range} not inside [{ci.k_min}, oo)")
    first_bad, failed = _sweep(ci, k_range)
    symbolic = symbolic_verdict(ci)
    flags = []
    rel = _relation_as_printed(ci)
    if rel is False:
        flags.append("printed relation is not literally true")
    denom_ok = None if ci.denom is None else ci.denom == ci.n_prime
    if denom_ok is False:
        flags.append("printed denominator differs from |V(G')|")
    if ci.added_back > ci.justified:
        flags.append("printed correction exceeds the stated adjacencies")
    justified = _justified_holds(ci)
    if not justified:
        flags.append("conclusion fails with the justified correction")
    return Verdict(
        case_id=ci.case_id,
        note=ci.note,
        line=ci.line,
        holds=first_bad is None and symbolic,
        symbolic=symbolic,
        first_bad_k=first_bad,
        failed_step=failed,
        relation_as_printed=rel,
        denom_matches=denom_ok,
        justified_holds=justified,
        flags=flags,
    )


def verify_all(k_max: int, corpus: list[CaseInequality] | None = None) -> dict:
    """Run every corpus entry over ``[k_min, k_max]``; JSON-ready report."""
    entries = load_corpus() if corpus is None else corpus
    if not entries:
        raise EmptyRange("empty corpus")
    k_min = max(ci.k_min for ci in entries)
    if k_max < k_min:
        raise EmptyRange(f"k_max={k_max} below k_min={k_min}")
    verdicts = [verify_inequality(ci, range(ci.k_min, k_max + 1)) for ci in entries]
    failures = [v.to_json() for v in verdicts if not v.holds]
    return {
        "schema": SCHEMA,
        "k_min": k_min,
        "k_max": k_max,
        "count": len(verdicts),
        "cases": len({v.case_id for v in verdicts}),
        "all_hold": not failures,
        "flagged": sum(bool(v.flags) for v in verdicts),
        "entries": [v.to_json() for v in verdicts],
        "failures": failures,
    }
