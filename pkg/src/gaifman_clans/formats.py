"""Text formats: graph files, implication files, DOT trees and lattice reports.

Graph file::

    n 5
    labels a b c d e      # optional; default labels are 0 .. n-1
    a d 1
    d e 1

Pairs not listed have class 0. Implication file::

    @items a b c d e      # optional universe order, may declare extra items
    @classes 2            # optional class count of the source structure
    a d -> b c

``#`` starts a comment anywhere on a line.
"""

from __future__ import annotations

import csv
import hashlib
import io
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import InputError, TwoStructure
from .decomposition import COMPLETE, LEAF, OTHERS, ClanNode, DecompositionTree
from .gaifman import Dataset, ingest_relational, ingest_transactional
from .implications import ClosureLattice, ImplicationSet

ARROWS = ("->", "=>", "⇒")
MAX_LABEL = 64
EDGE_STYLES = ("solid", "dashed", "dotted", "bold")
EDGE_COLORS = ("black", "blue", "red", "darkgreen", "orange", "purple")


def _lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


# -- graph files ------------------------------------------------------------------


def parse_graph_file(text: str) -> TwoStructure:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != "n" or len(lines[0][1]) != 2:
        raise InputError("graph file must start with 'n <count>'")
    try:
        n = int(lines[0][1][1])
    except ValueError:
        raise InputError(f"bad vertex count {lines[0][1][1]!r}") from None
    if n < 0:
        raise InputError("vertex count must be non-negative")
    body = lines[1:]
    labels = [str(i) for i in range(n)]
    if body and body[0][1][0] == "labels":
        labels = body[0][1][1:]
        if len(labels) != n:
            raise InputError(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise InputError("item labels must be unique")
        body = body[1:]
    index = {label: i for i, label in enumerate(labels)}
    m = np.zeros((n, n), dtype=np.int32)
    given: dict[tuple[int, int], int] = {}
    for lineno, tokens in body:
        if len(tokens) != 3:
            raise InputError(f"line {lineno}: expected 'u v class'")
        u, v, c = tokens
        if u not in index or v not in index:
            raise InputError(f"line {lineno}: vertex out of range in pair ({u}, {v})")
        try:
            cls_id = int(c)
        except ValueError:
            raise InputError(f"line {lineno}: bad class {c!r}") from None
        if cls_id < 0:
            raise InputError(f"line {lineno}: classes must be non-negative")
        a, b = index[u], index[v]
        if a == b:
            raise InputError(f"line {lineno}: self-pair ({u}, {v}) is not allowed")
        key = (min(a, b), max(a, b))
        if given.setdefault(key, cls_id) != cls_id:
            raise InputError(f"line {lineno}: pair ({u}, {v}) listed with conflicting classes")
        m[a, b] = m[b, a] = cls_id
    return TwoStructure(m, labels)


def render_graph_file(s: TwoStructure) -> str:
    out = [f"n {s.n}"]
    if s.labels != tuple(str(i) for i in range(s.n)):
        out.append("labels " + " ".join(s.labels))
    for u, v, c in s.pairs():
        if c != 0:
            out.append(f"{s.labels[u]} {s.labels[v]} {c}")
    return "\n".join(out) + "\n"


# -- implication files ------------------------------------------------------------


def _split_arrow(tokens: list[str]) -> Optional[tuple[list[str], list[str]]]:
    for i, tok in enumerate(tokens):
        if tok in ARROWS:
            return tokens[:i], tokens[i + 1 :]
    return None


def parse_implications(text: str) -> ImplicationSet:
    universe: dict[str, int] = {}
    num_classes = None
    rules: dict[frozenset[int], frozenset[int]] = {}

    def ids(labels):
        return [universe.setdefault(label, len(universe)) for label in labels]

    for lineno, tokens in _lines(text):
        if tokens[0] == "@items":
            ids(tokens[1:])
            continue
        if tokens[0] == "@classes":
            try:
                num_classes = int(tokens[1])
            except (IndexError, ValueError):
                raise InputError(f"line {lineno}: '@classes' needs an integer") from None
            continue
        parts = _split_arrow(tokens)
        if parts is None:
            raise InputError(f"line {lineno}: expected 'x y -> z1 z2 ...'")
        lhs, rhs = parts
        if len(lhs) != 2 or lhs[0] == lhs[1]:
            raise InputError(f"line {lineno}: antecedent must be a pair of distinct items")
        if not rhs:
            raise InputError(f"line {lineno}: empty consequent")
        pair = frozenset(ids(lhs))
        consequent = frozenset(ids(rhs))
        if pair & consequent:
            raise InputError(f"line {lineno}: consequent intersects the antecedent")
        if rules.setdefault(pair, consequent) != consequent:
            raise InputError(f"line {lineno}: pair {lhs[0]} {lhs[1]} has conflicting consequents")
    return ImplicationSet(tuple(universe), rules, num_classes)


def render_implications(b: ImplicationSet) -> str:
    out = []
    if b.universe:
        out.append("@items " + " ".join(b.universe))
    if b.num_classes is not None:
        out.append(f"@classes {b.num_classes}")
    u = b.universe
    for imp in b:
        x, y = sorted(imp.antecedent)
        out.append(f"{u[x]} {u[y]} -> " + " ".join(u[z] for z in sorted(imp.consequent)))
    return "\n".join(out) + "\n" if out else ""


# -- datasets ---------------------------------------------------------------------


def read_relational(text: str, keep_empty: bool = False) -> Dataset:
    return ingest_relational(list(csv.reader(io.StringIO(text))), keep_empty=keep_empty)


def read_transactional(text: str) -> Dataset:
    return ingest_transactional(line.replace(",", " ").split() for line in text.splitlines())


# -- lattice report ---------------------------------------------------------------


def _set_text(universe: Sequence[str], s: Iterable[int]) -> str:
    return "{" + ",".join(universe[i] for i in sorted(s)) + "}"


def render_lattice_report(lattice: ClosureLattice) -> str:
    """One closed set per line, largest first, strong ones marked ``*``; its
    immediate closed subsets follow on indented lines."""
    u = lattice.universe
    order = sorted(lattice.closed_sets, key=lambda c: (-len(c), sorted(c)))
    out = []
    for c in order:
        mark = "*" if lattice.strong[c] else " "
        out.append(f"{mark} {_set_text(u, c)}")
        for child in lattice.children[c]:
            cmark = "*" if lattice.strong[child] else " "
            out.append(f"    {cmark} {_set_text(u, child)}")
    return "\n".join(out) + "\n"


# -- DOT --------------------------------------------------------------------------


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def display_labels(labels: Sequence[str], limit: int = MAX_LABEL) -> list[str]:
    """Labels cut to ``limit`` characters; cut labels that collide get a hash suffix."""
    cut = [label if len(label) <= limit else label[:limit] for label in labels]
    seen: dict[str, int] = {}
    for c in cut:
        seen[c] = seen.get(c, 0) + 1
    out = []
    for full, c in zip(labels, cut):
        if seen[c] > 1 and c != full:
            c = c[: limit - 7] + "~" + hashlib.sha1(full.encode()).hexdigest()[:6]
        out.append(c)
    return out


def _edge_attrs(cls_id: int) -> str:
    style = EDGE_STYLES[(cls_id - 1) % len(EDGE_STYLES)]
    color = EDGE_COLORS[(cls_id - 1) // len(EDGE_STYLES) % len(EDGE_COLORS)]
    return f'style={style}, color={color}, label="{cls_id}"'


def _sorted_children(node: ClanNode) -> list[ClanNode]:
    return sorted(node.children, key=lambda c: c.rep)


def render_dot(tree: DecompositionTree, name: str = "decomposition") -> str:
    """Each internal node is a box holding one dot per child, joined as in its
    coarsest quotient (class 0 omitted). A dot standing for an internal child
    is linked to that child's box."""
    s = tree.structure
    labels = display_labels(s.labels)
    out = [f"graph {name} {{", "\tcompound=true;", "\tnode [fontsize=10];"]
    if tree.root is None:
        out.append("}")
        return "\n".join(out) + "\n"

    counter = [0]
    links: list[tuple[str, str, str]] = []

    def node_line(dot_id: str, child: ClanNode, indent: str) -> str:
        if child.kind == LEAF:
            return f'{indent}{dot_id} [shape=ellipse, label="{_escape(labels[child.rep])}"];'
        if child.kind == OTHERS:
            return f'{indent}{dot_id} [shape=box, style="rounded,dashed", label="Others({len(child.children)})"];'
        return f'{indent}{dot_id} [shape=point, width=0.12, label=""];'

    def emit(node: ClanNode, depth: int) -> str:
        """Write the box of ``node``; returns the id of a dot inside it."""
        box = counter[0]
        counter[0] += 1
        indent = "\t" * depth
        kids = _sorted_children(node)
        ids = [f"c{box}_{i}" for i in range(len(kids))]
        head = "complete" if node.kind == COMPLETE else node.kind
        if node.kind == COMPLETE:
            head += f" {node.color}"
        out.append(f"{indent}subgraph cluster_{box} {{")
        out.append(f'{indent}\tlabel="{head}";')
        for dot_id, child in zip(ids, kids):
            out.append(node_line(dot_id, child, indent + "\t"))
        for i in range(len(kids)):
            for j in range(i + 1, len(kids)):
                c = node.color if node.kind == COMPLETE else s.edge_class(kids[i].rep, kids[j].rep)
                if c:
                    out.append(f"{indent}\t{ids[i]} -- {ids[j]} [{_edge_attrs(c)}];")
        out.append(f"{indent}}}")
        for dot_id, child in zip(ids, kids):
            if not child.is_leaf:
                inner_box = counter[0]
                target = emit(child, depth)
                links.append((dot_id, target, f"cluster_{inner_box}"))
        return ids[0]

    if tree.root.is_leaf:
        out.append(node_line("c0_0", tree.root, "\t"))
    else:
        emit(tree.root, 1)
    for src, dst, cluster in links:
        out.append(f"\t{src} -- {dst} [style=dotted, lhead={cluster}];")
    out.append("}")
    return "\n".join(out) + "\n"


def render_tree_text(tree: DecompositionTree) -> str:
    """Indented plain-text view of a tree."""
    s = tree.structure
    out = []

    def walk(node: ClanNode, depth: int) -> None:
        pad = "  " * depth
        if node.kind == LEAF:
            out.append(pad + s.labels[node.rep])
        elif node.kind == OTHERS:
            out.append(pad + f"Others({len(node.children)})")
        else:
            head = f"complete[{node.color}]" if node.kind == COMPLETE else node.kind
            out.append(pad + head)
            for child in _sorted_children(node):
                walk(child, depth + 1)

    if tree.root is not None:
        walk(tree.root, 0)
    return "\n".join(out) + "\n"
