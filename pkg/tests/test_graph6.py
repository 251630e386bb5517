from __future__ import annotations

import io

import networkx as nx
import pytest
from hypothesis import given

from erdos_sos.errors import ParseError
from erdos_sos.graph import complete_graph
from erdos_sos.graph6 import HEADER, decode, encode, read_file

from conftest import graphs, to_nx


@given(graphs(max_n=20))
def test_round_trip(G):
    assert decode(encode(G)) == G


@given(graphs(max_n=20))
def test_matches_networkx_encoding(G):
    ours = encode(G)
    theirs = nx.to_graph6_bytes(to_nx(G), header=False).decode().strip()
    assert ours == theirs


def test_known_strings():
    assert encode(complete_graph(4)) == "C~"
    assert decode(">>graph6<<C~") == complete_graph(4)
    assert decode(HEADER + "Cl").m == 4


def test_large_order_size_field():
    G = complete_graph(63)
    assert encode(G).startswith("~")
    assert decode(encode(G)) == G


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        decode("C~~", line=3)
    assert (exc.value.line, exc.value.column) == (3, 3)
    with pytest.raises(ParseError) as exc:
        decode("C\x01")
    assert exc.value.column == 2
    with pytest.raises(ParseError):
        decode("")


def test_read_file_reports_line_numbers():
    with pytest.raises(ParseError) as exc:
        read_file(io.StringIO("C~\n\nC~~\n"))
    assert exc.value.line == 3
