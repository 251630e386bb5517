"""graph6 encoding and decoding.

Upper-triangle bits are taken column by column (``x(0,1), x(0,2), x(1,2),
x(0,3), ...``), packed six to a byte with 63 added.  Orders up to 62 use a
single size byte; larger orders use ``~`` followed by three bytes.
"""

from __future__ import annotations

from typing import Iterable, Iterator, TextIO

from .errors import ParseError
from .graph import Graph, build_graph

HEADER = ">>graph6<<"


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise ValueError(f"order {n} too large for graph6")


def encode(G: Graph) -> str:
    out = [_encode_n(G.n)]
    acc = 0
    filled = 0
    for j in range(1, G.n):
        row = G.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            filled += 1
            if filled == 6:
                out.append(chr(acc + 63))
                acc = 0
                filled = 0
    if filled:
        out.append(chr((acc << (6 - filled)) + 63))
    return "".join(out)


def decode(text: str, line: int | None = None) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise ParseError("empty graph6 string", line, 1)
    for col, ch in enumerate(s, start=1):
        if not 63 <= ord(ch) <= 126:
            raise ParseError(f"byte {ch!r} outside graph6 range", line, col)
    if s[0] != "~":
        n = ord(s[0]) - 63
        body = s[1:]
        offset = 2
    else:
        if len(s) < 4 or s[1] == "~":
            raise ParseError("unsupported or truncated size field", line, 1)
        n = 0
        for ch in s[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        body = s[4:]
        offset = 5
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise ParseError(
            f"expected {need} data bytes for order {n}, got {len(body)}",
            line,
            offset + min(len(body), need),
        )
    if n == 0:
        raise ParseError("graph of order 0", line, 1)
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[pos // 6]) - 63
            if byte >> (5 - pos % 6) & 1:
                edges.append((i, j))
            pos += 1
    return build_graph(n, edges)


def read_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Decode one graph per non-blank line, reporting 1-based line numbers."""
    for lineno, raw in enumerate(lines, start=1):
        if raw.strip():
            yield decode(raw, line=lineno)


def read_file(handle: TextIO) -> list[Graph]:
    return list(read_lines(handle))
