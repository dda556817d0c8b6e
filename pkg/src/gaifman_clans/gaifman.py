"""Datasets, co-occurrence counts and the Gaifman-graph variants built from them."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import InputError, Item, TwoStructure


@dataclass(frozen=True)
class Dataset:
    """Transactions over a fixed universe of labelled items."""

    universe: tuple[str, ...]
    transactions: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(set(self.universe)) != len(self.universe):
            raise InputError("item labels must be unique")
        n = len(self.universe)
        for t in self.transactions:
            if any(not 0 <= i < n for i in t):
                raise InputError("transaction mentions an item outside the universe")

    @property
    def items(self) -> list[Item]:
        return [Item(i, label) for i, label in enumerate(self.universe)]

    def __len__(self) -> int:
        return len(self.transactions)

    def item_counts(self) -> np.ndarray:
        counts = np.zeros(len(self.universe), dtype=np.int64)
        for t in self.transactions:
            for i in t:
                counts[i] += 1
        return counts

    def labelled(self) -> list[frozenset[str]]:
        return [frozenset(self.universe[i] for i in t) for t in self.transactions]


def _from_label_sets(rows: Iterable[Iterable[str]]) -> Dataset:
    index: dict[str, int] = {}
    transactions = []
    for row in rows:
        ids = frozenset(index.setdefault(label, len(index)) for label in row)
        if ids:
            transactions.append(ids)
    return Dataset(tuple(index), tuple(transactions))


def ingest_relational(rows: Sequence[Sequence[str]], keep_empty: bool = False) -> Dataset:
    """Header plus rows; each row becomes the transaction of its ``column=value`` items.

    Empty cells are dropped unless ``keep_empty`` is set, in which case they
    become the item ``column=``.
    """
    rows = [list(r) for r in rows]
    if len(rows) < 2:
        raise InputError("relational input needs a header and at least one row")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise InputError("column names must be unique")
    body = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(f"row {lineno} has {len(row)} cells, expected {len(header)}")
        cells = []
        for col, value in zip(header, row):
            value = value.strip()
            if value or keep_empty:
                cells.append(f"{col}={value}")
        body.append(cells)
    return _from_label_sets(body)


def ingest_transactional(lines: Iterable[Sequence[str]]) -> Dataset:
    """Token lists become transactions; duplicates collapse and empty lines are skipped."""
    return _from_label_sets(dict.fromkeys(tok for tok in line if tok) for line in lines)


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Symmetric pair counts with the diagonal holding single-item counts."""

    universe: tuple[str, ...]
    matrix: np.ndarray
    transactions: int

    def count(self, x: int, y: int) -> int:
        if x == y:
            raise InputError("co-occurrence of an item with itself is undefined")
        return int(self.matrix[x, y])

    def count_by_label(self, x: str, y: str) -> int:
        return self.count(self.universe.index(x), self.universe.index(y))

    def item_count(self, x: int) -> int:
        return int(self.matrix[x, x])

    def off_diagonal(self) -> np.ndarray:
        m = self.matrix.copy()
        np.fill_diagonal(m, 0)
        return m


def count_cooccurrences(d: Dataset) -> CooccurrenceCounts:
    n = len(d.universe)
    incidence = np.zeros((len(d.transactions), n), dtype=np.int64)
    for row, t in enumerate(d.transactions):
        incidence[row, list(t)] = 1
    m = incidence.T @ incidence
    m.setflags(write=False)
    return CooccurrenceCounts(d.universe, m, len(d.transactions))


def filter_items(d: Dataset, min_count: Optional[int] = None, top_n: Optional[int] = None) -> Dataset:
    """Keep frequent items, by absolute count or by rank (ties at the cutoff all kept).

    Transactions are projected onto the kept items; ones left empty are dropped.
    Item order of the input is preserved.
    """
    if (min_count is None) == (top_n is None):
        raise InputError("give exactly one of min_count and top_n")
    counts = d.item_counts()
    if min_count is not None:
        if min_count < 1:
            raise InputError("min_count must be at least 1")
        cutoff = min_count
    else:
        if top_n < 1:
            raise InputError("top_n must be at least 1")
        n = len(d.universe)
        if top_n > n:
            warnings.warn(f"top_n={top_n} exceeds the {n} available items; keeping all", stacklevel=2)
            top_n = n
        if n == 0:
            return d
        cutoff = max(int(np.sort(counts)[::-1][top_n - 1]), 1)
    keep = [i for i in range(len(d.universe)) if counts[i] >= cutoff]
    remap = {old: new for new, old in enumerate(keep)}
    transactions = []
    for t in d.transactions:
        projected = frozenset(remap[i] for i in t if i in remap)
        if projected:
            transactions.append(projected)
    return Dataset(tuple(d.universe[i] for i in keep), tuple(transactions))


def _structure(c: CooccurrenceCounts, classes: np.ndarray) -> TwoStructure:
    return TwoStructure(classes, c.universe)


def build_standard(c: CooccurrenceCounts) -> TwoStructure:
    return _structure(c, (c.off_diagonal() >= 1).astype(np.int32))


def build_thresholded(c: CooccurrenceCounts, t: int) -> TwoStructure:
    """Class 1 where the pair count reaches ``t``."""
    if t < 1:
        raise InputError("threshold must be at least 1")
    return _structure(c, (c.off_diagonal() >= t).astype(np.int32))


def build_linear(c: CooccurrenceCounts, n: int) -> TwoStructure:
    """Class ``ceil(count / n)``: fixed-width buckets of size ``n``."""
    if n < 1:
        raise InputError("interval size must be at least 1")
    m = c.off_diagonal()
    return _structure(c, (-(-m // n)).astype(np.int32))


def exponential_class(count: int) -> int:
    """``ceil(log2(count + 1))`` in integer arithmetic."""
    if count < 0:
        raise InputError("counts are non-negative")
    return int(count).bit_length()


def build_exponential(c: CooccurrenceCounts) -> TwoStructure:
    m = c.off_diagonal()
    classes = np.vectorize(exponential_class, otypes=[np.int32])(m) if m.size else m.astype(np.int32)
    return _structure(c, classes)


def apply_lower_threshold(c: CooccurrenceCounts, t: int) -> CooccurrenceCounts:
    """Counts strictly below ``t`` become 0; item counts on the diagonal are kept."""
    if t < 1:
        raise InputError("threshold must be at least 1")
    m = c.matrix.copy()
    diag = np.diag(m).copy()
    m[m < t] = 0
    np.fill_diagonal(m, diag)
    m.setflags(write=False)
    return CooccurrenceCounts(c.universe, m, c.transactions)
