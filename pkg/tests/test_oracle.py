import random

import pytest

from gaifman_clans.core import GuardError, InputError, TwoStructure
from gaifman_clans.decomposition import COMPLETE, PRIMITIVE, canonical_form, canonical_text
from gaifman_clans.oracle import (
    all_clans,
    brute_force_tree,
    is_clan,
    like_children,
    random_graph,
    random_structure,
    strong_clans,
)
from helpers import ids, load_graph


def test_is_clan_five_items():
    s = load_graph("five_items.graph")
    assert is_clan(s, ids(s, "abc"))
    assert is_clan(s, ids(s, "ab"))
    assert is_clan(s, ids(s, "de"))
    assert not is_clan(s, ids(s, "ad"))
    assert is_clan(s, [])
    assert is_clan(s, ids(s, "a"))
    with pytest.raises(InputError):
        is_clan(s, [9])


def test_all_clans_five_items():
    s = load_graph("five_items.graph")
    nontrivial = {c for c in all_clans(s) if 1 < len(c) < s.n}
    assert nontrivial == {ids(s, t) for t in ["ab", "ac", "bc", "de", "abc", "abcd", "abce"]}


def test_strong_clans_five_items():
    s = load_graph("five_items.graph")
    expected = {ids(s, v) for v in "abcde"} | {ids(s, "abc"), ids(s, "abcde")}
    assert strong_clans(s) == expected


def test_guard():
    s = TwoStructure.from_edge_list(17, [])
    with pytest.raises(GuardError):
        all_clans(s)
    with pytest.raises(GuardError):
        brute_force_tree(s)
    assert len(all_clans(TwoStructure.from_edge_list(5, []), guard=5)) == 31


def test_brute_force_tree_types():
    s = load_graph("tri_class.graph")
    tree = brute_force_tree(s)
    assert tree.root.kind == COMPLETE
    kinds = sorted(node.kind for node in tree.internal_nodes())
    assert kinds == [COMPLETE, COMPLETE, PRIMITIVE]
    assert canonical_text(canonical_form(tree, normalize_colors=False)) == (
        "complete[0](primitive(a, b, c), complete[1](d, e))"
    )


def test_like_children():
    s = load_graph("walkthrough.graph")
    sub = s.induced(range(5))
    tree = brute_force_tree(sub.induced(range(4)))
    # e behaves like b inside the primitive clan over a..d
    e_like = like_children(sub, tree.root, 4)
    assert [c.rep for c in e_like] == [1]


def test_generators_are_seeded():
    a = random_structure(random.Random(5))
    b = random_structure(random.Random(5))
    assert a == b
    g = random_graph(random.Random(5), (4, 4), p=1.0)
    assert len(g.edges()) == 6
