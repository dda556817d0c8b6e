"""Incremental strong-clan decomposition of symmetric 2-structures.

Vertices are inserted one at a time into the current decomposition tree. At each
clan the children (its coarsest quotient) are classified by how the new vertex
sees them, and one of seven insertion cases rebuilds the clan. Edges from
vertices to clans are tracked in an :class:`~gaifman_clans.core.EdgeRegistry`;
every clan node is packed once, when it is created, and a clan whose membership
changes is always replaced by a node with a fresh id.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Optional, Sequence

from .core import EdgeRegistry, InputError, TwoStructure

log = logging.getLogger(__name__)

LEAF = "leaf"
COMPLETE = "complete"
PRIMITIVE = "primitive"
OTHERS = "others"


class DecompositionError(RuntimeError):
    """Internal consistency failure inside the decomposition engine."""


class ClanNode:
    """One node of a decomposition tree.

    Leaves carry a single vertex and use the vertex id as node id. Internal
    nodes are ``complete`` (with ``color``) or ``primitive``; their children are
    the maximal strong clans inside them. ``others`` nodes are synthetic leaves
    produced by :func:`group_others` and keep the collapsed leaves as children.
    """

    __slots__ = ("id", "kind", "color", "children", "vertices", "rep")

    def __init__(
        self,
        node_id: int,
        kind: str,
        vertices: frozenset[int],
        children: Sequence["ClanNode"] = (),
        color: Optional[int] = None,
    ):
        self.id = node_id
        self.kind = kind
        self.color = color
        self.children = list(children)
        self.vertices = vertices
        self.rep = min(vertices) if vertices else -1

    @classmethod
    def leaf(cls, vertex: int) -> "ClanNode":
        return cls(vertex, LEAF, frozenset((vertex,)))

    @property
    def is_leaf(self) -> bool:
        return self.kind in (LEAF, OTHERS)

    @property
    def item(self) -> int:
        if self.kind != LEAF:
            raise AttributeError("only leaves carry a single item")
        return self.rep

    def walk(self) -> Iterator["ClanNode"]:
        """Preorder traversal; ``others`` nodes are not descended into."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if node.kind != OTHERS:
                stack.extend(reversed(node.children))

    def __repr__(self) -> str:
        if self.kind == LEAF:
            return f"Leaf({self.rep})"
        tag = f"{self.kind}[{self.color}]" if self.kind == COMPLETE else self.kind
        return f"{tag}#{self.id}({', '.join(map(repr, self.children))})"


@dataclass
class VisibilityPartition:
    """Children of a clan split by how a new vertex sees them.

    ``same_color`` holds children seen with the clan's own color (complete clans
    only), ``other_visible`` the remaining visible children together with the
    find-representative of the class they are seen with, and ``nonvisible`` the
    children whose members the vertex tells apart.
    """

    same_color: list[ClanNode] = field(default_factory=list)
    other_visible: list[tuple[ClanNode, Hashable]] = field(default_factory=list)
    nonvisible: list[ClanNode] = field(default_factory=list)
    seen: dict[int, int] = field(default_factory=dict)

    @property
    def visible(self) -> list[ClanNode]:
        return self.same_color + [node for node, _ in self.other_visible]


class DecompositionTree:
    """Strong-clan decomposition of the vertices inserted so far."""

    def __init__(self, structure: TwoStructure, registry: Optional[EdgeRegistry] = None):
        self.structure = structure
        self.registry = registry if registry is not None else EdgeRegistry(structure)
        self.root: Optional[ClanNode] = None
        self.inserted: list[int] = []
        self.trace: list[tuple[int, str]] = []

    def insert(self, x: int) -> ClanNode:
        if not 0 <= x < self.structure.n:
            raise InputError(f"vertex {x} is not in the structure")
        if x in self.inserted_set:
            raise InputError(f"vertex {x} was already inserted")
        self.root = insert_vertex(self, self.root, x)
        self.inserted.append(x)
        return self.root

    @property
    def inserted_set(self) -> frozenset[int]:
        return self.root.vertices if self.root is not None else frozenset()

    def nodes(self) -> Iterator[ClanNode]:
        if self.root is not None:
            yield from self.root.walk()

    def internal_nodes(self) -> Iterator[ClanNode]:
        return (node for node in self.nodes() if not node.is_leaf)

    def clan_sets(self) -> set[frozenset[int]]:
        """Vertex sets of the internal nodes (the nonsingleton strong clans)."""
        return {node.vertices for node in self.internal_nodes()}

    def label(self, vertex: int) -> str:
        return self.structure.labels[vertex]

    def with_root(self, root: Optional[ClanNode]) -> "DecompositionTree":
        other = DecompositionTree(self.structure, self.registry)
        other.root = root
        other.inserted = list(self.inserted)
        other.trace = list(self.trace)
        return other

    def __repr__(self) -> str:
        return f"DecompositionTree({self.root!r})"


# -- pack --------------------------------------------------------------------


def pack(clan: ClanNode, s: TwoStructure, reg: EdgeRegistry) -> None:
    """Register an edge from every outside vertex that sees all of ``clan``'s children alike."""
    children = clan.children
    if not children:
        return
    inside = clan.vertices
    first_id = children[0].id
    rest = [child.id for child in children[1:]]
    find = reg.find
    for v in range(s.n):
        if v in inside:
            continue
        initial_edge = (v, first_id)
        initial = find(initial_edge)
        if initial is None:
            continue
        for cid in rest:
            if find((v, cid)) != initial:
                break
        else:
            reg.register_edge(v, clan.id, initial_edge)


def _make_clan(
    reg: EdgeRegistry, kind: str, children: Sequence[ClanNode], color: Optional[int] = None
) -> ClanNode:
    if len(children) < 2:
        raise DecompositionError(f"a {kind} clan needs at least two children")
    vertices = frozenset().union(*(child.vertices for child in children))
    node = ClanNode(reg.new_clan_id(), kind, vertices, children, color)
    pack(node, reg.structure, reg)
    return node


# -- visibility and split -------------------------------------------------------


def classify_visibility(x: int, clan: ClanNode, reg: EdgeRegistry) -> VisibilityPartition:
    if x in clan.vertices:
        raise InputError(f"vertex {x} already belongs to the clan")
    part = VisibilityPartition()
    for child in clan.children:
        rep = reg.find((x, child.id))
        if rep is None:
            part.nonvisible.append(child)
            continue
        cls_id = reg.class_of(rep)
        part.seen[child.id] = cls_id
        if clan.kind == COMPLETE and cls_id == clan.color:
            part.same_color.append(child)
        else:
            part.other_visible.append((child, rep))
    return part


def _group_by_color(
    reg: EdgeRegistry, visible: Sequence[tuple[ClanNode, Hashable]], color: Optional[int]
) -> list[ClanNode]:
    groups: dict[Hashable, list[ClanNode]] = {}
    for node, rep in visible:
        groups.setdefault(rep, []).append(node)
    out = []
    for members in groups.values():
        if len(members) > 1:
            out.append(_make_clan(reg, COMPLETE, members, color))
        else:
            out.append(members[0])
    return out


def split(clan: ClanNode, x: int, reg: EdgeRegistry) -> list[ClanNode]:
    """Maximal strong clans below ``clan`` that ``x`` sees uniformly.

    ``x`` must not see ``clan`` itself. Visible children of a primitive clan
    survive as they are; visible children of a complete clan are merged per
    color into new complete clans; nonvisible children are split recursively.
    """
    if clan.is_leaf or reg.find((x, clan.id)) is not None:
        raise DecompositionError(f"split called on clan {clan.id}, which vertex {x} sees")
    out: list[ClanNode] = []
    if clan.kind == PRIMITIVE:
        for child in clan.children:
            if reg.find((x, child.id)) is not None:
                out.append(child)
            else:
                out.extend(split(child, x, reg))
        return out
    visible = []
    for child in clan.children:
        rep = reg.find((x, child.id))
        if rep is None:
            out.extend(split(child, x, reg))
        else:
            visible.append((child, rep))
    return _group_by_color(reg, visible, clan.color) + out


# -- insertion -------------------------------------------------------------------


def _find_like(
    s: TwoStructure, clan: ClanNode, part: VisibilityPartition
) -> Optional[ClanNode]:
    """The child that sees the rest of the clan exactly as the new vertex does, if any."""
    if len(part.nonvisible) > 1:
        return None
    candidates = part.nonvisible if part.nonvisible else clan.children
    seen = part.seen
    rows = s._rows
    for cand in candidates:
        row = rows[cand.rep]
        for other in clan.children:
            if other is cand:
                continue
            if seen.get(other.id) != row[other.rep]:
                break
        else:
            return cand
    return None


def _uniform_class(part: VisibilityPartition, clan: ClanNode) -> Optional[int]:
    if part.nonvisible:
        return None
    classes = set(part.seen.values())
    return classes.pop() if len(classes) == 1 else None


def insert_vertex(tree: DecompositionTree, clan: Optional[ClanNode], x: int) -> ClanNode:
    """Insert vertex ``x`` into the subtree rooted at ``clan``; return the new subtree root."""
    reg = tree.registry
    s = tree.structure
    if clan is None:
        tree.trace.append((x, "init-empty"))
        return ClanNode.leaf(x)
    if clan.kind == LEAF:
        tree.trace.append((x, "init-single"))
        return _make_clan(reg, COMPLETE, [clan, ClanNode.leaf(x)], s.edge_class(x, clan.rep))

    part = classify_visibility(x, clan, reg)
    new_leaf = ClanNode.leaf(x)

    if clan.kind == COMPLETE:
        color = clan.color
        if len(part.same_color) == len(clan.children):
            tree.trace.append((x, "1a"))
            return _make_clan(reg, COMPLETE, clan.children + [new_leaf], color)
        if part.same_color:
            tree.trace.append((x, "1b"))
            kept = {id(node) for node in part.same_color}
            rest = [child for child in clan.children if id(child) not in kept]
            if len(rest) == 1:
                sub = insert_vertex(tree, rest[0], x)
            else:
                aux = _make_clan(reg, COMPLETE, rest, color)
                sub = insert_vertex(tree, aux, x)
            return _make_clan(reg, COMPLETE, part.same_color + [sub], color)
        uniform = _uniform_class(part, clan)
        if uniform is not None:
            tree.trace.append((x, "1c"))
            return _make_clan(reg, COMPLETE, [clan, new_leaf], uniform)
        tree.trace.append((x, "1d"))
        children = _group_by_color(reg, part.other_visible, color)
        for child in part.nonvisible:
            children.extend(split(child, x, reg))
        return _make_clan(reg, PRIMITIVE, children + [new_leaf])

    if clan.kind != PRIMITIVE:
        raise DecompositionError(f"cannot insert into a node of kind {clan.kind!r}")
    like = _find_like(s, clan, part)
    if like is not None:
        tree.trace.append((x, "2a"))
        sub = insert_vertex(tree, like, x)
        children = [sub if child is like else child for child in clan.children]
        return _make_clan(reg, PRIMITIVE, children)
    uniform = _uniform_class(part, clan)
    if uniform is not None:
        tree.trace.append((x, "2b"))
        return _make_clan(reg, COMPLETE, [clan, new_leaf], uniform)
    tree.trace.append((x, "2c"))
    children = [child for child in clan.children if child.id in part.seen]
    for child in part.nonvisible:
        children.extend(split(child, x, reg))
    return _make_clan(reg, PRIMITIVE, children + [new_leaf])


def decompose(s: TwoStructure, order: Optional[Sequence[int]] = None) -> DecompositionTree:
    """Build the strong-clan decomposition tree by inserting vertices one by one."""
    if order is None:
        order = range(s.n)
    order = list(order)
    if sorted(order) != list(range(s.n)):
        raise InputError("insertion order must be a permutation of the vertices")
    tree = DecompositionTree(s)
    for v in order:
        tree.insert(v)
    return tree


# -- canonical form and simplification --------------------------------------------


def _canon(node: ClanNode, labels: Sequence[str], colors: dict, normalize: bool, with_colors: bool):
    if node.kind == LEAF:
        return labels[node.rep]
    if node.kind == OTHERS:
        return f"Others({len(node.vertices)})"
    kids = sorted(node.children, key=lambda c: c.rep)
    color = None
    if node.kind == COMPLETE and with_colors:
        color = node.color
        if normalize:
            color = colors.setdefault(node.color, len(colors))
    return (node.kind, color) + tuple(_canon(k, labels, colors, normalize, with_colors) for k in kids)


def canonical_form(
    tree: DecompositionTree | ClanNode,
    labels: Optional[Sequence[str]] = None,
    normalize_colors: bool = True,
    with_colors: bool = True,
):
    """Order-independent nested-tuple form of a tree.

    Children are sorted by their smallest vertex id. With ``normalize_colors``
    the classes of complete nodes are renamed 0, 1, 2, ... in order of first
    appearance, so a two-class structure and its complement compare equal.
    """
    if isinstance(tree, DecompositionTree):
        labels = tree.structure.labels if labels is None else labels
        root = tree.root
    else:
        root = tree
    if root is None:
        return None
    if labels is None:
        raise InputError("labels are required for a bare node")
    return _canon(root, labels, {}, normalize_colors, with_colors)


def canonical_text(form) -> str:
    if form is None:
        return "()"
    if isinstance(form, str):
        return form
    kind, color, *kids = form
    head = kind if color is None else f"{kind}[{color}]"
    return f"{head}({', '.join(canonical_text(k) for k in kids)})"


def _copy_grouped(node: ClanNode, k: int) -> ClanNode:
    if node.is_leaf:
        return node
    children = [_copy_grouped(child, k) for child in node.children]
    if node.kind == COMPLETE and node.color == 0:
        leaves = [child for child in children if child.kind == LEAF]
        if len(leaves) >= k:
            members = frozenset().union(*(leaf.vertices for leaf in leaves))
            others = ClanNode(-1, OTHERS, members, leaves)
            children = [child for child in children if child.kind != LEAF] + [others]
    return ClanNode(node.id, node.kind, node.vertices, children, node.color)


def group_others(tree: DecompositionTree, k: int) -> DecompositionTree:
    """Copy of ``tree`` where each class-0 complete node with at least ``k`` leaf
    children has those leaves collapsed into a single ``Others`` node."""
    if k < 2:
        raise InputError("others grouping needs k >= 2")
    if tree.root is None:
        return tree.with_root(None)
    return tree.with_root(_copy_grouped(tree.root, k))
