"""Rebuilding a graph from its modular implications, up to complement.

The pair graph has one vertex per unordered pair of items. Its edges join two
pairs sharing an endpoint and are labelled 1 when the two pairs must have the
same status (both edges or both non-edges) and 0 when exactly one is an edge.
Only a spanning set of chain edges is built; fixing the status of the first
pair then determines every other pair.

Pairs are 0-based tuples ``(i, j)`` with ``i < j``, where the ids follow the
universe order of the implication set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import InputError, TwoStructure, UnsupportedError
from .implications import ImplicationSet, generate_implications

Pair = tuple[int, int]


class ReconstructionError(ValueError):
    """The implication set does not come from any graph."""


@dataclass
class PairGraph:
    n: int
    vertices: list[Pair] = field(default_factory=list)
    edges: dict[tuple[Pair, Pair], int] = field(default_factory=dict)

    def label(self, p: Pair, q: Pair) -> int:
        if (p, q) in self.edges:
            return self.edges[(p, q)]
        return self.edges[(q, p)]

    def neighbours(self) -> dict[Pair, list[tuple[Pair, int]]]:
        adj: dict[Pair, list[tuple[Pair, int]]] = {v: [] for v in self.vertices}
        for (p, q), lab in self.edges.items():
            adj[p].append((q, lab))
            adj[q].append((p, lab))
        return adj

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.neighbours()
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for q, _ in adj[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(self.vertices)


def _pair(i: int, j: int) -> Pair:
    return (i, j) if i < j else (j, i)


def build_pair_graph(b: ImplicationSet) -> PairGraph:
    """Chain edges over the universe order; a label is 0 when the probe item distinguishes the pair."""
    n = b.n
    g = PairGraph(n)
    for j in range(1, n):
        g.vertices.append((0, j))
        if j >= 2:
            g.edges[((0, j - 1), (0, j))] = 0 if 0 in b.consequent(j - 1, j) else 1
            for i in range(1, j):
                g.vertices.append((i, j))
                g.edges[((i - 1, j), (i, j))] = 0 if j in b.consequent(i - 1, i) else 1
    return g


def _check_pair(p: Pair, n: int) -> Pair:
    if len(p) != 2:
        raise InputError(f"{p!r} is not a pair")
    i, j = int(p[0]), int(p[1])
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise InputError(f"invalid pair {p!r} over {n} items")
    return _pair(i, j)


def pair_path(p1: Pair, p2: Pair, n: int) -> list[Pair]:
    """Chain-edge path from ``p1`` to ``p2`` in the pair graph.

    With pairs ``(l, k)`` and ``(m, p)`` (second index larger, ``k <= p``) the
    path climbs to the first item, walks the first item's chain to ``p`` and
    descends to ``m``. Its length is ``|l - m|`` when ``k == p`` and
    ``l + (p - k) + m`` in 0-based ids otherwise.
    """
    a, b = _check_pair(p1, n), _check_pair(p2, n)
    if a == b:
        raise InputError("path endpoints must differ")
    flipped = a[1] > b[1]
    if flipped:
        a, b = b, a
    (l, k), (m, p) = a, b
    if k == p:
        step = 1 if l < m else -1
        path = [(i, p) for i in range(l, m + step, step)]
    else:
        path = [(i, k) for i in range(l, -1, -1)]
        path += [(0, i) for i in range(k + 1, p + 1)]
        path += [(i, p) for i in range(1, m + 1)]
    return path[::-1] if flipped else path


def _reject_multiclass(b: ImplicationSet) -> None:
    if b.num_classes is not None and b.num_classes > 2:
        raise UnsupportedError("reconstruction is only defined for implication sets of graphs")


def _violations(b: ImplicationSet, m: np.ndarray) -> list[tuple[int, int, int]]:
    """Triples (x, y, w) where w's view of x and y disagrees with the stored distinguishing set."""
    bad = []
    for x in range(b.n):
        for y in range(x + 1, b.n):
            d = b.consequent(x, y)
            for w in range(b.n):
                if w == x or w == y:
                    continue
                if (m[x, w] != m[y, w]) != (w in d):
                    bad.append((x, y, w))
    return bad


def reconstruct(b: ImplicationSet, seed_present: bool) -> TwoStructure:
    """Graph whose modular implications are ``b``; the first pair is an edge iff ``seed_present``."""
    _reject_multiclass(b)
    n = b.n
    m = np.zeros((n, n), dtype=np.int32)
    if n >= 2:
        g = build_pair_graph(b)
        if not g.is_connected():  # pragma: no cover - chain edges always span
            raise ReconstructionError("pair graph is disconnected; cannot propagate the seed")
        status = {g.vertices[0]: 1 if seed_present else 0}
        adj = g.neighbours()
        queue = deque([g.vertices[0]])
        while queue:
            p = queue.popleft()
            for q, lab in adj[p]:
                want = status[p] if lab == 1 else 1 - status[p]
                if q not in status:
                    status[q] = want
                    queue.append(q)
                elif status[q] != want:  # pragma: no cover - the chain edges form a tree
                    raise ReconstructionError("not a modular implication set of any graph")
        for (i, j), st in status.items():
            m[i, j] = m[j, i] = st
        bad = _violations(b, m)
        if bad:
            x, y, w = bad[0]
            u = b.universe
            raise ReconstructionError(
                "not a modular implication set of any graph: "
                f"{u[w]} conflicts with the implication for {u[x]}{u[y]}"
            )
    return TwoStructure(m, b.universe)


def verify_roundtrip(s: TwoStructure) -> bool:
    if not s.classes <= {0, 1}:
        raise UnsupportedError("round-trip is only defined for graphs")
    b = generate_implications(s)
    rebuilt = []
    for seed in (True, False):
        r = reconstruct(b, seed)
        if not generate_implications(r).same_rules(b):
            return False
        rebuilt.append(r)
    if rebuilt[0] != rebuilt[1].complement() and s.n >= 2:
        return False
    return s in rebuilt
