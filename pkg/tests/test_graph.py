import pytest

from lexplace.errors import InputError
from lexplace.graph import (
    Digraph,
    canonicalize,
    child_shadows,
    connector_shadow,
    connectors,
    failure_aggregate,
    failure_number,
    format_graph,
    is_multitree,
    is_untangled,
    laminar_pair,
    parse_graph,
    reachable,
    roots_and_leaves,
)

from conftest import load


def test_reachable_is_reflexive(cyclic):
    assert reachable(cyclic, "e") == {"e", "f"}
    assert reachable(cyclic, "d") == {"d", "g", "h"}
    assert reachable(Digraph(["v"]), "v") == {"v"}


def test_reachable_unknown_vertex(cyclic):
    with pytest.raises(InputError):
        reachable(cyclic, "zz")


def test_roots_leaves_connectors(four_roots):
    roots, leaves = roots_and_leaves(four_roots)
    assert roots == {"r1", "r2", "r3", "r4"}
    assert leaves == {"1", "2", "3", "4", "e"}
    assert connectors(four_roots) == {"1", "2", "3", "4", "e"}


def test_shadows(four_roots):
    assert connector_shadow(four_roots, "c") == {"3", "4"}
    assert connector_shadow(four_roots, "e") == {"e"}
    assert connector_shadow(four_roots, "a1") == {"1", "2"}
    assert sorted(map(sorted, child_shadows(four_roots, "r3"))) == [["1", "2", "3", "4"], ["e"]]
    assert sorted(map(sorted, child_shadows(four_roots, "r2"))) == [["1"], ["3", "4"]]


def test_laminar_pair():
    assert laminar_pair([{1}, {3, 4}], [{1, 2}, {1, 2, 3, 4}])
    assert not laminar_pair([{1, 2}], [{2, 3}])
    assert laminar_pair([{1, 2}, {5}], [])


def test_multitree_accepts_trees_and_shared_connectors(four_roots):
    assert is_multitree(four_roots)
    assert is_multitree(load("path.txt"))
    assert is_multitree(Digraph())


def test_multitree_diamond_witness():
    v = is_multitree(load("diamond.txt"))
    assert not v
    assert v.kind == "diamond-2"
    assert v.witness == ("a", "b", "c", "d")


def test_multitree_shortcut_witness():
    g = Digraph("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    v = is_multitree(g)
    assert not v and v.kind == "diamond-1"
    assert set(v.witness) == {"a", "b", "c"}


def test_multitree_cycle_witness(cyclic):
    v = is_multitree(cyclic)
    assert not v and v.kind == "cycle"
    assert set(v.witness) == {"a", "c"}


def test_untangled(four_roots):
    assert is_untangled(four_roots)
    v = is_untangled(load("tangle.txt"))
    assert not v and v.kind == "tangle"
    assert set(v.witness) == {"a", "b"}


def test_canonicalize_cyclic_input(cyclic, canonical):
    c = canonicalize(cyclic)
    assert set(c.edges) == set(canonical.edges)
    assert is_multitree(c) and is_untangled(c)


def test_canonicalize_idempotent_and_single_edge(cyclic):
    once = canonicalize(cyclic)
    assert canonicalize(once) == once
    edge = Digraph("uv", [("u", "v")])
    assert canonicalize(edge) == edge


def test_canonical_model_preserves_failure_numbers(cyclic, canonical):
    for v in "abcde":
        assert failure_number(cyclic, v, ["f", "g"]) == failure_number(canonical, v, ["f", "g"])
    assert [failure_number(canonical, v, ["f", "g"]) for v in "abcde"] == [2, 1, 2, 1, 1]


def test_failure_aggregate(canonical):
    assert failure_aggregate(canonical, ["f", "g"]) == (2, 5, 1)
    assert failure_aggregate(canonical, ["g", "h"]) == (4, 2, 2)
    assert sum(failure_aggregate(canonical, ["f"])) == len(canonical)


def test_failure_aggregate_rejects_non_leaf(canonical):
    with pytest.raises(InputError):
        failure_aggregate(canonical, ["a"])
    with pytest.raises(InputError):
        failure_aggregate(canonical, ["f", "f"])


def test_parse_errors():
    with pytest.raises(InputError):
        parse_graph("a b c\n")
    with pytest.raises(InputError):
        parse_graph("a a\n")
    with pytest.raises(InputError):
        parse_graph("a b\na b\n")
    with pytest.raises(InputError):
        parse_graph("a-b c\n")


def test_parse_format_round_trip(four_roots, cyclic):
    for g in (four_roots, cyclic, Digraph()):
        back = parse_graph(format_graph(g))
        assert back == g
        assert back.vertices == g.vertices


def test_empty_graph():
    g = parse_graph("# nothing\n\n")
    assert len(g) == 0
    assert is_multitree(g) and is_untangled(g)
