"""Ledger records and the line-oriented corpus format they are stored in."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..errors import ParseError
from .poly import Poly, parse_linear, parse_sum

K_MIN = 9
FIELDS = ("case_id", "removed", "added_back", "n'", "bound", "denom", "target",
          "justified", "note")


@dataclass(frozen=True)
class QuadraticBound:
    """The bound ``1/2 (a k^2 + b k + c)``."""

    a: int
    b: int
    c: int

    @property
    def twice(self) -> Poly:
        return Poly.of(self.c, self.b, self.a)

    def __call__(self, k: int) -> Fraction:
        return Fraction(self.twice(k), 2)

    def __str__(self) -> str:
        return f"1/2({self.twice})"


@dataclass(frozen=True)
class CaseInequality:
    """One displayed chain ``e(G') >= e(G) - sum(removed) + added_back > bound``
    followed by ``avedeg(G') > 2 bound / n' (relation) target``.
    """

    case_id: str
    removed: tuple[Poly, ...]
    added_back: int
    n_prime: Poly
    claimed_lower: QuadraticBound
    denom: Poly | None
    relation: str
    claimed_avedeg_exceeds: Poly
    justified: int
    note: str = ""
    line: int = 0
    k_min: int = K_MIN

    @property
    def removed_total(self) -> Poly:
        return sum(self.removed, Poly(()))


def _parse_record(text: str, line: int) -> CaseInequality:
    cols = [c.strip() for c in text.split("|")]
    if len(cols) < 7 or len(cols) > len(FIELDS):
        raise ParseError(f"expected 7 to {len(FIELDS)} fields, got {len(cols)}", line=line)
    cols += [""] * (len(FIELDS) - len(cols))
    case_id, removed, added, n_prime, bound, denom, target, justified, note = cols
    try:
        terms = tuple(parse_linear(t) for t in removed.split(","))
        a, b, c = (int(x) for x in bound.split(","))
        rel, rhs = target[0], target[1:]
        if rel not in "=>":
            raise ParseError(f"target must start with '>' or '=': {target!r}")
        added_back = parse_sum(added)
        return CaseInequality(
            case_id=case_id,
            removed=terms,
            added_back=added_back,
            n_prime=parse_linear(n_prime),
            claimed_lower=QuadraticBound(a, b, c),
            denom=None if denom == "-" else parse_linear(denom),
            relation=rel,
            claimed_avedeg_exceeds=parse_linear(rhs),
            justified=parse_sum(justified) if justified else added_back,
            note=note,
            line=line,
        )
    except ParseError as exc:
        raise ParseError(str(exc), line=line) from None
    except (ValueError, IndexError) as exc:
        raise ParseError(str(exc), line=line) from None


def parse_corpus(text: str) -> list[CaseInequality]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append(_parse_record(body, i))
    return out


def load_corpus(path: str | Path | None = None) -> list[CaseInequality]:
    """The checked-in corpus, or the file at ``path``."""
    if path is None:
        text = resources.files(__package__).joinpath("corpus.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_corpus(text)
