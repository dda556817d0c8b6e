"""Items, symmetric 2-structures and the union-find edge registry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np

ABSENT = 0
UNDEFINED_DIAGONAL = -1


class InputError(ValueError):
    """Malformed user input (bad vertex, bad pair, bad parameter)."""


class UnsupportedError(ValueError):
    """Operation is not defined for the given structure."""


class GuardError(RuntimeError):
    """Input exceeds the size limit of an exhaustive procedure."""


@dataclass(frozen=True)
class Item:
    id: int
    label: str


class TwoStructure:
    """Complete loop-free graph whose unordered pairs carry an equivalence class.

    Classes are small non-negative integers and class 0 means "absent". A plain
    graph is the two-class case. Instances are immutable.
    """

    __slots__ = ("_labels", "_matrix", "_rows", "_classes")

    def __init__(self, classes: np.ndarray, labels: Optional[Sequence[str]] = None):
        m = np.array(classes, dtype=np.int32, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError("class matrix must be square")
        n = m.shape[0]
        np.fill_diagonal(m, UNDEFINED_DIAGONAL)
        if not np.array_equal(m, m.T):
            raise InputError("class matrix must be symmetric")
        off = m[~np.eye(n, dtype=bool)]
        if off.size and off.min() < 0:
            raise InputError("edge classes must be non-negative")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = [str(label) for label in labels]
        if len(labels) != n:
            raise InputError(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise InputError("item labels must be unique")
        m.setflags(write=False)
        self._matrix = m
        self._labels = tuple(labels)
        # plain nested lists make scalar lookups in the decomposition loop cheap
        self._rows = m.tolist()
        self._classes = frozenset(int(c) for c in np.unique(off)) if off.size else frozenset()

    @classmethod
    def from_edge_list(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Optional[Sequence[str]] = None,
    ) -> "TwoStructure":
        """Two-class structure: listed pairs get class 1, everything else class 0."""
        if n < 0:
            raise InputError("vertex count must be non-negative")
        m = np.zeros((n, n), dtype=np.int32)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"vertex out of range in pair ({u}, {v})")
            if u == v:
                raise InputError(f"self-pair ({u}, {v}) is not allowed")
            m[u, v] = m[v, u] = 1
        return cls(m, labels)

    @classmethod
    def from_pair_classes(
        cls,
        n: int,
        pairs: dict[tuple[int, int], int],
        labels: Optional[Sequence[str]] = None,
    ) -> "TwoStructure":
        m = np.zeros((n, n), dtype=np.int32)
        for (u, v), c in pairs.items():
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"vertex out of range in pair ({u}, {v})")
            if u == v:
                raise InputError(f"self-pair ({u}, {v}) is not allowed")
            m[u, v] = m[v, u] = c
        return cls(m, labels)

    @property
    def n(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def items(self) -> list[Item]:
        return [Item(i, label) for i, label in enumerate(self._labels)]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only class matrix; the diagonal holds -1."""
        return self._matrix

    @property
    def classes(self) -> frozenset[int]:
        """Classes occurring on at least one pair."""
        return self._classes

    @property
    def num_classes(self) -> int:
        return len(self._classes)

    def edge_class(self, x: int, y: int) -> int:
        if x == y:
            raise InputError("edge class is undefined on self-pairs")
        return self._rows[x][y]

    def index(self, label: str) -> int:
        try:
            return self._labels.index(label)
        except ValueError:
            raise InputError(f"unknown item {label!r}") from None

    def class_neighbourhood(self, x: int, cls_id: int) -> frozenset[int]:
        """The set of y joined to x by an edge of class ``cls_id``."""
        row = self._rows[x]
        return frozenset(y for y in range(self.n) if y != x and row[y] == cls_id)

    def complement(self) -> "TwoStructure":
        if not self._classes <= {0, 1}:
            raise UnsupportedError(
                f"complement is only defined for two-class structures, got classes {sorted(self._classes)}"
            )
        m = 1 - self._matrix
        return TwoStructure(m, self._labels)

    def induced(self, vertices: Sequence[int]) -> "TwoStructure":
        idx = list(vertices)
        return TwoStructure(self._matrix[np.ix_(idx, idx)], [self._labels[i] for i in idx])

    def relabel(self, labels: Sequence[str]) -> "TwoStructure":
        return TwoStructure(self._matrix, labels)

    def permuted(self, order: Sequence[int]) -> "TwoStructure":
        """Same structure with vertex ``order[i]`` moved to position ``i``."""
        return self.induced(order)

    def pairs(self) -> Iterable[tuple[int, int, int]]:
        for u in range(self.n):
            row = self._rows[u]
            for v in range(u + 1, self.n):
                yield u, v, row[v]

    def edges(self) -> list[tuple[int, int]]:
        """Pairs in class 1, for two-class structures read as graphs."""
        return [(u, v) for u, v, c in self.pairs() if c == 1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TwoStructure):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._matrix, other._matrix)

    def __hash__(self) -> int:
        return hash((self._labels, self._matrix.tobytes()))

    def __repr__(self) -> str:
        return f"TwoStructure(n={self.n}, classes={sorted(self._classes)})"


class EdgeRegistry:
    """Union-find over directed edges between vertices and clan nodes.

    Base vertex pairs are not materialised: every pair ``(u, v)`` of vertices is
    treated as an element already united with the anchor of its class. Edges
    involving clan nodes are created by :meth:`make_set` and joined to a class
    with :meth:`union`. Union is by rank; find compresses paths.

    Clan node ids start at ``structure.n`` so vertex and clan ids never collide.
    """

    def __init__(self, structure: TwoStructure):
        self.structure = structure
        self._rows = structure._rows
        self._n = structure.n
        self._parent: dict[Hashable, Hashable] = {}
        self._rank: dict[Hashable, int] = {}
        self._class_of_root: dict[Hashable, int] = {}
        self._next_clan = structure.n
        self.find_calls = 0
        self.visits = 0
        self.unions = 0
        self.make_sets = 0

    # -- ids -------------------------------------------------------------
    def new_clan_id(self) -> int:
        cid = self._next_clan
        self._next_clan += 1
        return cid

    def is_vertex(self, node_id: int) -> bool:
        return 0 <= node_id < self._n

    def _anchor(self, cls_id: int) -> tuple[str, int]:
        key = ("class", cls_id)
        if key not in self._parent:
            self._parent[key] = key
            self._rank[key] = 0
            self._class_of_root[key] = cls_id
        return key

    # -- union-find primitives ---------------------------------------------
    def make_set(self, element: Hashable) -> None:
        self.make_sets += 1
        self._parent[element] = element
        self._rank[element] = 0

    def find(self, element: Hashable) -> Optional[Hashable]:
        """Canonical representative of ``element``'s class, or None if never registered."""
        self.find_calls += 1
        if (
            type(element) is tuple
            and len(element) == 2
            and type(element[0]) is int
            and element[0] < self._n
            and element[1] < self._n
        ):
            u, v = element
            if u == v:
                return None
            element = self._anchor(self._rows[u][v])
        parent = self._parent
        if element not in parent:
            return None
        root = element
        self.visits += 1
        while parent[root] != root:
            root = parent[root]
            self.visits += 1
        while parent[element] != root:
            parent[element], element = root, parent[element]
        return root

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        self.unions += 1
        ra, rb = self.find(a), self.find(b)
        if ra is None or rb is None:
            raise KeyError("union of an unregistered element")
        if ra == rb:
            return ra
        if self._rank[ra] < self._rank[rb]:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if self._rank[ra] == self._rank[rb]:
            self._rank[ra] += 1
        cls_id = self._class_of_root.pop(rb, None)
        if cls_id is not None:
            self._class_of_root[ra] = cls_id
        return ra

    # -- edge-level helpers -------------------------------------------------
    def class_of(self, representative: Optional[Hashable]) -> Optional[int]:
        if representative is None:
            return None
        return self._class_of_root.get(representative)

    def edge_class(self, a: int, b: int) -> Optional[int]:
        """Integer class of the edge between two vertex/clan ids, or None when undefined."""
        if a < self._n and b < self._n:
            self.find_calls += 1
            return self._rows[a][b] if a != b else None
        return self.class_of(self.find((a, b)))

    def register_edge(self, a: int, b: int, witness: tuple[int, int]) -> None:
        """Create ``(a, b)`` and ``(b, a)`` and unite both with the class of ``witness``."""
        for edge in ((a, b), (b, a)):
            self.make_set(edge)
            self.union(witness, edge)


def registry_edge_class(reg: EdgeRegistry, a: int, b: int) -> Optional[Hashable]:
    """Find-representative of the edge between ``a`` and ``b``; None means undefined."""
    if a == b:
        raise InputError("registry lookups need two distinct endpoints")
    return reg.find((a, b))
