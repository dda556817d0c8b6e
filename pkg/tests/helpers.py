"""Shared fixtures paths and hypothesis strategies."""

from itertools import combinations
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from gaifman_clans.core import TwoStructure
from gaifman_clans.formats import parse_graph_file, parse_implications

DATA = Path(__file__).parent / "data"


def load_graph(name: str) -> TwoStructure:
    return parse_graph_file((DATA / name).read_text())


def load_implications(name: str):
    return parse_implications((DATA / name).read_text())


def ids(s, text: str) -> frozenset:
    """Item ids of single-letter labels, e.g. ids(s, "abc")."""
    return frozenset(s.index(ch) for ch in text)


@st.composite
def structures(draw, min_n=0, max_n=7, max_classes=4):
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, max_classes))
    vals = draw(st.lists(st.integers(0, k - 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    m = np.zeros((n, n), dtype=np.int32)
    for (u, v), c in zip(combinations(range(n), 2), vals):
        m[u, v] = m[v, u] = c
    return TwoStructure(m)


def graphs(min_n=0, max_n=9):
    return structures(min_n=min_n, max_n=max_n, max_classes=2)


def quotient_class(s, node, i, j):
    kids = node.children
    return s.edge_class(kids[i].rep, kids[j].rep)


def has_induced_p4(s, node) -> bool:
    k = len(node.children)
    adj = {(i, j): quotient_class(s, node, i, j) == 1 for i in range(k) for j in range(k) if i != j}
    for quad in combinations(range(k), 4):
        degrees = sorted(sum(adj[(a, b)] for b in quad if b != a) for a in quad)
        edges = sum(degrees) // 2
        # a 4-vertex graph with 3 edges and degrees 1,1,2,2 is exactly P4
        if edges == 3 and degrees == [1, 1, 2, 2]:
            return True
    return False
