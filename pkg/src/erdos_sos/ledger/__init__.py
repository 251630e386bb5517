"""Audit of the case analysis arithmetic in exact integer polynomials."""

from __future__ import annotations

from .check import baseline, symbolic_verdict, verify_all, verify_inequality
from .corpus import CaseInequality, QuadraticBound, load_corpus, parse_corpus
from .poly import Poly, parse_linear, positive_from

__all__ = [
    "CaseInequality",
    "Poly",
    "QuadraticBound",
    "baseline",
    "load_corpus",
    "parse_corpus",
    "parse_linear",
    "positive_from",
    "symbolic_verdict",
    "verify_all",
    "verify_inequality",
]
