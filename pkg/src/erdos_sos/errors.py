"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ErdosSosError(Exception):
    """Base class for all contract violations raised by the package."""


class CapExceeded(ErdosSosError):
    """An order cap (graph order 64, enumeration desk caps) was exceeded."""


class BadEdge(ErdosSosError):
    """A loop or an out-of-range endpoint was supplied."""


class MissingEdge(ErdosSosError):
    """An edge slated for deletion is not present in the graph."""


class InvalidTree(ErdosSosError):
    """The edge list does not describe a tree."""


class DomainMismatch(ErdosSosError):
    """A vertex map does not cover the whole tree."""


class HallViolation(ErdosSosError):
    """Pending leaves cannot be matched into the frontier.

    ``leaves`` is a set of pending tree leaves whose joint neighbourhood in
    the frontier is smaller than the set itself.
    """

    def __init__(self, leaves, neighbourhood):
        self.leaves = frozenset(leaves)
        self.neighbourhood = frozenset(neighbourhood)
        super().__init__(
            f"leaves {sorted(self.leaves)} see only frontier vertices "
            f"{sorted(self.neighbourhood)}"
        )


class NotAdjacent(ErdosSosError):
    """A swap target misses the image of some embedded tree neighbour."""


class DeltaOutOfRange(ErdosSosError):
    """Maximum degree outside [k-1, k+3] for an n = k+4 instance."""


class PreconditionMismatch(ErdosSosError):
    """Bindings handed to a case handler do not satisfy its guard."""


class ProofGap(ErdosSosError):
    """A handler's extension failed although an embedding exists."""

    def __init__(self, label, detail="", trace=None):
        self.label = label
        self.detail = detail
        self.trace = trace
        super().__init__(f"proof gap in {label}: {detail}")


class Infeasible(ErdosSosError):
    """No embedding exists although the hypotheses hold: a counterexample."""


class EmptyRange(ErdosSosError):
    """A requested k range is empty or starts below the covered minimum."""


class TargetInfeasible(ErdosSosError):
    """A random-instance target cannot be met at this order."""


class ParseError(ErdosSosError):
    """Malformed graph6, tree or corpus input."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
