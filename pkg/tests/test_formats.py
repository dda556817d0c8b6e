import pytest
from hypothesis import given, settings

from gaifman_clans.core import InputError, TwoStructure
from gaifman_clans.decomposition import decompose, group_others
from gaifman_clans.formats import (
    display_labels,
    parse_graph_file,
    parse_implications,
    render_dot,
    render_graph_file,
    render_implications,
    render_lattice_report,
    render_tree_text,
)
from gaifman_clans.implications import enumerate_closed_sets, generate_implications
from helpers import DATA, load_graph, structures


def test_parse_five_items():
    s = load_graph("five_items.graph")
    assert s.n == 5
    assert {s.labels[u] + s.labels[v] for u, v in s.edges()} == {"ad", "ae", "bd", "be", "cd", "ce", "de"}


def test_parse_minimal_graph():
    s = parse_graph_file("n 2\n")
    assert s.edge_class(0, 1) == 0
    assert s.labels == ("0", "1")


def test_parse_three_classes():
    s = load_graph("tri_class.graph")
    assert s.classes == {0, 1, 2}


@pytest.mark.parametrize(
    "text",
    [
        "",
        "3\n",
        "n x\n",
        "n 3\n0 1 1\n1 0 2\n",
        "n 3\n0 3 1\n",
        "n 3\n1 1 1\n",
        "n 3\n0 1\n",
        "n 3\n0 1 -1\n",
        "n 3\n0 1 x\n",
        "n 2\nlabels a\n",
        "n 2\nlabels a a\n",
    ],
)
def test_graph_file_errors(text):
    with pytest.raises(InputError):
        parse_graph_file(text)


def test_graph_file_allows_repeated_consistent_pair():
    s = parse_graph_file("n 3  # three items\n0 1 2\n1 0 2\n")
    assert s.edge_class(0, 1) == 2


@settings(max_examples=100, deadline=None)
@given(structures(max_n=8))
def test_graph_file_roundtrip(s):
    assert parse_graph_file(render_graph_file(s)) == s
    labelled = s.relabel([f"x{i}" for i in range(s.n)])
    assert parse_graph_file(render_graph_file(labelled)) == labelled


def test_parse_transactional_lines():
    lines = "\n".join(
        f"{p[0]} {p[1]} -> {' '.join(q)}"
        for p, q in [("ad", "bc"), ("ae", "bc"), ("bd", "ac"), ("be", "ac"), ("cd", "ab"), ("ce", "ab")]
    )
    b = parse_implications("@items a b c d e\n" + lines)
    assert b.same_rules(generate_implications(load_graph("five_items.graph")))


def test_parse_comments_only():
    b = parse_implications("# nothing here\n\n   # still nothing\n")
    assert b.n == 0 and len(b) == 0


def test_parse_arrows_and_classes():
    b = parse_implications("@classes 3\na b => c\nb c ⇒ a\n")
    assert b.num_classes == 3
    assert len(b) == 2


@pytest.mark.parametrize(
    "text",
    [
        "a -> b",
        "a b c -> d",
        "a a -> b",
        "a b -> a",
        "a b -> c\nb a -> d",
        "a b c",
        "a b ->",
        "@classes x",
    ],
)
def test_implication_file_errors(text):
    with pytest.raises(InputError):
        parse_implications(text)


def test_duplicate_identical_implication_is_fine():
    assert len(parse_implications("a b -> c\nb a -> c\n")) == 1


@settings(max_examples=100, deadline=None)
@given(structures(max_n=7))
def test_implication_file_roundtrip(s):
    b = generate_implications(s.relabel([f"v{i}" for i in range(s.n)]))
    again = parse_implications(render_implications(b))
    assert again.universe == b.universe
    assert again.same_rules(b)
    assert again.num_classes == b.num_classes


def test_declared_extra_items():
    b = parse_implications("@items a b c z\na b -> c\n")
    assert b.universe == ("a", "b", "c", "z")


def test_dot_golden():
    tree = decompose(load_graph("five_items.graph"))
    assert render_dot(tree) == (DATA / "five_items.dot").read_text()


def test_dot_is_deterministic():
    s = load_graph("split_example.graph")
    assert render_dot(decompose(s)) == render_dot(decompose(s, list(range(s.n))[::-1]))


def test_dot_single_leaf():
    dot = render_dot(decompose(TwoStructure.from_edge_list(1, [], labels=["only"])))
    assert 'label="only"' in dot
    assert "cluster" not in dot


def test_dot_primitive_edges_and_others():
    s = load_graph("walkthrough.graph")
    dot = render_dot(decompose(s))
    assert 'label="primitive"' in dot
    grouped = render_dot(group_others(decompose(TwoStructure.from_edge_list(5, [(0, 1)])), 3))
    assert "Others(3)" in grouped


def test_dot_escapes_and_truncates():
    long_a = "x" * 70 + "A"
    long_b = "x" * 70 + "B"
    labels = [long_a, long_b, 'say "hi"']
    shown = display_labels(labels)
    assert len(shown[0]) == 64 and shown[0] != shown[1]
    assert shown == display_labels(labels)
    dot = render_dot(decompose(TwoStructure.from_edge_list(3, [(0, 1)], labels=labels)))
    assert 'say \\"hi\\"' in dot


def test_lattice_report_marks_strong_sets():
    s = load_graph("five_items.graph")
    report = render_lattice_report(enumerate_closed_sets(generate_implications(s)))
    lines = report.splitlines()
    assert lines[0] == "* {a,b,c,d,e}"
    assert "* {a,b,c}" in lines
    assert "  {a,b,c,d}" in lines
    assert "    * {a,b,c}" in lines


def test_tree_text():
    text = render_tree_text(decompose(load_graph("five_items.graph")))
    assert text.splitlines() == ["complete[1]", "  complete[0]", "    a", "    b", "    c", "  d", "  e"]
