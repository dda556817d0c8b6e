"""Clan implications and the closure space they define.

For a pair of items ``x, y`` the distinguishing set holds every other item that
sees ``x`` and ``y`` through different classes; the implication ``xy -> D(x, y)``
is kept when that set is nonempty. Closed sets of these implications are
exactly the clans of the structure, which lets the decomposition be read off
the closure lattice.

Item sets are frozensets of item ids; closures run on integer bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .core import GuardError, InputError, TwoStructure
from .decomposition import COMPLETE, PRIMITIVE, ClanNode

MAX_LATTICE_ITEMS = 16

@dataclass(frozen=True)
class Implication:
    antecedent: frozenset[int]
    consequent: frozenset[int]

    def __post_init__(self):
        if len(self.antecedent) != 2:
            raise InputError("antecedent must be a pair of distinct items")
        if not self.consequent:
            raise InputError("implications with an empty consequent are discarded, not stored")
        if self.antecedent & self.consequent:
            raise InputError("consequent must be disjoint from the antecedent")


@dataclass
class ImplicationSet:
    """At most one implication per unordered item pair.

    ``num_classes`` records how many edge classes the source structure had,
    when known; it selects the child-count bound in :func:`infer_clan_type`.
    """

    universe: tuple[str, ...]
    implications: dict[frozenset[int], frozenset[int]] = field(default_factory=dict)
    num_classes: Optional[int] = None

    def __post_init__(self):
        self.universe = tuple(self.universe)
        n = len(self.universe)
        for pair, rhs in self.implications.items():
            Implication(pair, rhs)
            if any(not 0 <= v < n for v in pair | rhs):
                raise InputError("implication mentions an item outside the universe")

    @property
    def n(self) -> int:
        return len(self.universe)

    def __len__(self) -> int:
        return len(self.implications)

    def __iter__(self) -> Iterator[Implication]:
        for pair in sorted(self.implications, key=sorted):
            yield Implication(pair, self.implications[pair])

    def consequent(self, x: int, y: int) -> frozenset[int]:
        """Right-hand side for pair ``xy``; empty when no implication is stored."""
        return self.implications.get(frozenset((x, y)), frozenset())

    def same_rules(self, other: "ImplicationSet") -> bool:
        return self.universe == other.universe and self.implications == other.implications

    def by_label(self) -> dict[frozenset[str], frozenset[str]]:
        u = self.universe
        return {
            frozenset(u[i] for i in pair): frozenset(u[i] for i in rhs)
            for pair, rhs in self.implications.items()
        }

    def index(self, label: str) -> int:
        try:
            return self.universe.index(label)
        except ValueError:
            raise InputError(f"unknown item {label!r}") from None

    def ids(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(label) for label in labels)

    def labels(self, ids: Iterable[int]) -> list[str]:
        return [self.universe[i] for i in sorted(ids)]


def distinguishing_set(s: TwoStructure, x: int, y: int) -> frozenset[int]:
    """Items other than ``x``, ``y`` joined to them by edges of different classes."""
    if x == y:
        raise InputError("distinguishing set needs two distinct items")
    m = s.matrix
    differ = np.flatnonzero(m[x] != m[y])
    return frozenset(int(z) for z in differ if z != x and z != y)


def generate_implications(s: TwoStructure) -> ImplicationSet:
    out = {}
    for x in range(s.n):
        for y in range(x + 1, s.n):
            d = distinguishing_set(s, x, y)
            if d:
                out[frozenset((x, y))] = d
    return ImplicationSet(s.labels, out, num_classes=max(s.num_classes, 1))


# -- closure ----------------------------------------------------------------------


def _to_mask(items: Iterable[int]) -> int:
    m = 0
    for v in items:
        m |= 1 << v
    return m


def _from_mask(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


class _Closer:
    """Bitmask fixpoint over pair-antecedent implications."""

    def __init__(self, b: ImplicationSet):
        self.rules = [(_to_mask(pair), _to_mask(rhs)) for pair, rhs in b.implications.items()]

    def __call__(self, mask: int) -> int:
        rules = self.rules
        changed = True
        while changed:
            changed = False
            remaining = []
            for lhs, rhs in rules:
                if lhs & mask == lhs:
                    if rhs & ~mask:
                        mask |= rhs
                        changed = True
                else:
                    remaining.append((lhs, rhs))
            rules = remaining
        return mask


def closure(b: ImplicationSet, x: Iterable[int]) -> frozenset[int]:
    """Least superset of ``x`` satisfying every implication in ``b``."""
    items = frozenset(x)
    if any(not 0 <= v < b.n for v in items):
        raise InputError("closure argument must be a subset of the universe")
    return _from_mask(_Closer(b)(_to_mask(items)))


# -- lattice ----------------------------------------------------------------------


@dataclass
class ClosureLattice:
    """All closed sets, the immediate-subset (Hasse) relation and strong flags.

    The empty set is closed and appears as the bottom element; it is never
    flagged strong.
    """

    universe: tuple[str, ...]
    closed_sets: list[frozenset[int]]
    children: dict[frozenset[int], list[frozenset[int]]]
    strong: dict[frozenset[int], bool]
    num_classes: Optional[int] = None

    def __contains__(self, s: Iterable[int]) -> bool:
        return frozenset(s) in self.strong

    def strong_sets(self) -> list[frozenset[int]]:
        return [c for c in self.closed_sets if self.strong[c]]


def _next_closures(close: _Closer, n: int) -> Iterator[int]:
    """Closed sets in lectic order (NextClosure)."""
    current = close(0)
    yield current
    full = (1 << n) - 1
    while current != full:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                continue
            low = bit - 1
            candidate = close((current & low) | bit)
            if candidate & ~current & low == 0:
                current = candidate
                yield current
                break
        else:  # pragma: no cover - unreachable for a valid closure operator
            break


def enumerate_closed_sets(b: ImplicationSet, max_universe: int = MAX_LATTICE_ITEMS) -> ClosureLattice:
    n = b.n
    if n > max_universe:
        raise GuardError(
            f"closure lattice refused: {n} items exceeds the guard of {max_universe}; "
            "filter the items first"
        )
    close = _Closer(b)
    masks = list(_next_closures(close, n))
    universe_mask = (1 << n) - 1

    # Upper covers of X are the minimal closures of X + {i}; invert them for children.
    lower: dict[int, list[int]] = {m: [] for m in masks}
    for m in masks:
        cands = {close(m | 1 << i) for i in range(n) if not m >> i & 1}
        for c in cands:
            if not any(d != c and d & c == d for d in cands):
                lower[c].append(m)

    # X is strong iff every closure of a pair straddling its boundary contains X.
    pair_closure = {}
    for i in range(n):
        for j in range(i + 1, n):
            pair_closure[(i, j)] = close(1 << i | 1 << j)

    def strong(m: int) -> bool:
        if m == 0:
            return False
        inside = [i for i in range(n) if m >> i & 1]
        outside = [j for j in range(n) if not m >> j & 1]
        for i in inside:
            for j in outside:
                pc = pair_closure[(i, j) if i < j else (j, i)]
                if pc & m != m:
                    return False
        return True

    sets = [_from_mask(m) for m in masks]
    by_mask = dict(zip(masks, sets))
    children = {by_mask[m]: sorted((by_mask[c] for c in lower[m]), key=_lattice_key) for m in masks}
    flags = {by_mask[m]: strong(m) for m in masks}
    if universe_mask not in by_mask:  # pragma: no cover - the universe is always closed
        raise AssertionError("universe missing from the closure lattice")
    return ClosureLattice(b.universe, sets, children, flags, b.num_classes)


def _lattice_key(s: frozenset[int]):
    return (len(s), sorted(s))


def strong_closed_sets(lattice: ClosureLattice) -> set[frozenset[int]]:
    return {c for c, flag in lattice.strong.items() if flag}


def primitive_child_bound(num_classes: Optional[int]) -> int:
    """Children a primitive clan must exceed: 3 for graphs, 2 with three or more classes."""
    if num_classes is not None and num_classes <= 2:
        return 3
    return 2


def infer_clan_type(lattice: ClosureLattice, c: Iterable[int]) -> str:
    """``primitive`` iff every immediate closed subset is strong and there are enough of them."""
    c = frozenset(c)
    if not lattice.strong.get(c, False):
        raise InputError(f"{sorted(c)} is not a strong closed set")
    if len(c) < 2:
        raise InputError("clan type is only defined for sets of two or more items")
    kids = lattice.children[c]
    bound = primitive_child_bound(lattice.num_classes)
    if len(kids) > bound and all(lattice.strong[k] for k in kids):
        return PRIMITIVE
    return COMPLETE


def lattice_to_tree(lattice: ClosureLattice) -> Optional[ClanNode]:
    """Skeleton tree of the strong closed sets; complete nodes carry no color."""
    strong = sorted(strong_closed_sets(lattice), key=len, reverse=True)
    if not strong:
        return None
    counter = [len(lattice.universe)]

    def build(vertices: frozenset[int]) -> ClanNode:
        if len(vertices) == 1:
            return ClanNode.leaf(next(iter(vertices)))
        inner = [c for c in strong if c < vertices]
        maximal = [c for c in inner if not any(c < d for d in inner)]
        node_id = counter[0]
        counter[0] += 1
        kind = infer_clan_type(lattice, vertices)
        return ClanNode(node_id, kind, vertices, [build(c) for c in sorted(maximal, key=min)])

    return build(strong[0])
