"""Exhaustive ground truth for small 2-structures.

Everything here scans all vertex subsets, so it refuses structures larger than
``MAX_ORACLE_VERTICES``. Sets are handled as bitmasks internally and returned
as frozensets of vertex ids.
"""

from __future__ import annotations

import random
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .core import GuardError, InputError, TwoStructure
from .decomposition import COMPLETE, PRIMITIVE, ClanNode, DecompositionTree

MAX_ORACLE_VERTICES = 16


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _members(mask: int) -> frozenset[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def _class_masks(s: TwoStructure) -> list[list[int]]:
    """For each vertex, the bitmasks of its class neighbourhoods."""
    out = []
    for x in range(s.n):
        by_class: dict[int, int] = {}
        for y in range(s.n):
            if y != x:
                c = s.edge_class(x, y)
                by_class[c] = by_class.get(c, 0) | (1 << y)
        out.append(list(by_class.values()))
    return out


def is_clan(s: TwoStructure, c: Iterable[int]) -> bool:
    """True iff no vertex outside ``c`` sees two members of ``c`` through different classes."""
    members = set(c)
    for v in members:
        if not 0 <= v < s.n:
            raise InputError(f"vertex {v} out of range")
    if len(members) <= 1:
        return True
    for x in range(s.n):
        if x in members:
            continue
        if len({s.edge_class(x, y) for y in members}) > 1:
            return False
    return True


def _guard(s: TwoStructure, guard: int) -> None:
    if s.n > guard:
        raise GuardError(f"exhaustive scan refused: {s.n} vertices exceeds the guard of {guard}")


def _clan_masks(s: TwoStructure, guard: int) -> list[int]:
    _guard(s, guard)
    n = s.n
    masks = _class_masks(s)
    full = (1 << n) - 1
    out = []
    for c in range(1, full + 1):
        ok = True
        outside = full & ~c
        x = 0
        while outside:
            if outside & 1:
                if not any(c & ~m == 0 for m in masks[x]):
                    ok = False
                    break
            outside >>= 1
            x += 1
        if ok:
            out.append(c)
    return out


def all_clans(s: TwoStructure, guard: int = MAX_ORACLE_VERTICES) -> set[frozenset[int]]:
    """Every nonempty clan of ``s``."""
    return {_members(m) for m in _clan_masks(s, guard)}


def _overlap(a: int, b: int) -> bool:
    return bool(a & b) and bool(a & ~b) and bool(b & ~a)


def strong_clans(s: TwoStructure, guard: int = MAX_ORACLE_VERTICES) -> set[frozenset[int]]:
    """Nonempty clans that overlap no other clan."""
    clans = _clan_masks(s, guard)
    return {_members(a) for a in clans if not any(_overlap(a, b) for b in clans)}


def _cross_classes(s: TwoStructure, parts: list[frozenset[int]]) -> set[int]:
    classes = set()
    for p, q in combinations(parts, 2):
        for u in p:
            for v in q:
                classes.add(s.edge_class(u, v))
    return classes


def brute_force_tree(s: TwoStructure, guard: int = MAX_ORACLE_VERTICES) -> DecompositionTree:
    """Decomposition tree assembled top-down from the exhaustively found strong clans."""
    tree = DecompositionTree(s)
    if s.n == 0:
        return tree
    strong = sorted(strong_clans(s, guard), key=len, reverse=True)
    next_id = [s.n]

    def build(vertices: frozenset[int]) -> ClanNode:
        if len(vertices) == 1:
            return ClanNode.leaf(next(iter(vertices)))
        inner = [c for c in strong if c < vertices]
        maximal = [c for c in inner if not any(c < d for d in inner)]
        children = [build(c) for c in sorted(maximal, key=min)]
        classes = _cross_classes(s, maximal)
        node_id = next_id[0]
        next_id[0] += 1
        if len(classes) == 1:
            return ClanNode(node_id, COMPLETE, vertices, children, classes.pop())
        return ClanNode(node_id, PRIMITIVE, vertices, children)

    tree.root = build(frozenset(range(s.n)))
    tree.inserted = list(range(s.n))
    return tree


def like_children(s: TwoStructure, node: ClanNode, x: int) -> list[ClanNode]:
    """Children of ``node`` that ``x`` is like: it sees the rest of the node as they do."""
    out = []
    for child in node.children:
        rest = node.vertices - child.vertices
        if all(s.edge_class(x, z) == s.edge_class(y, z) for y in child.vertices for z in rest):
            out.append(child)
    return out


def random_structure(
    rng: random.Random,
    n_range: tuple[int, int] = (2, 8),
    class_range: tuple[int, int] = (2, 4),
    n: Optional[int] = None,
) -> TwoStructure:
    """Seeded random 2-structure with uniformly drawn classes."""
    if n is None:
        n = rng.randint(*n_range)
    k = rng.randint(*class_range)
    m = np.zeros((n, n), dtype=np.int32)
    for u in range(n):
        for v in range(u + 1, n):
            m[u, v] = m[v, u] = rng.randrange(k)
    return TwoStructure(m)


def random_graph(rng: random.Random, n_range: tuple[int, int] = (2, 10), p: Optional[float] = None) -> TwoStructure:
    n = rng.randint(*n_range)
    prob = rng.random() if p is None else p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < prob]
    return TwoStructure.from_edge_list(n, edges)
