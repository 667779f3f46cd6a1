import pytest

from lexplace.decomposer import (
    Case,
    Kind,
    apply_include,
    apply_merge,
    build_hypergraph,
    classify,
    decompose,
    full_subproblem,
    hypergraph_components,
    make_subproblem,
    verify_admissible,
)
from lexplace.errors import ValidationError
from lexplace.graph import Digraph

from conftest import corpus, load

REGION_A = ["n1", "n2", "n4", "n5", "n6"]
REGION_B = REGION_A + ["n15", "n16", "n17"]
REGION_C = REGION_B + ["n14"]


def test_admissibility_regions():
    g = load("regions.txt")
    a = verify_admissible(g, REGION_A)
    assert not a and a.kind == "child-descendant"
    b = verify_admissible(g, REGION_B)
    assert not b and b.kind == "connector"
    assert b.witness == ("n15", "n14")
    assert verify_admissible(g, REGION_C)
    assert verify_admissible(g, g.vertices)


def test_hypergraph(four_roots):
    s = full_subproblem(four_roots)
    h = build_hypergraph(four_roots, s)
    assert set(h.edge_sets(four_roots)) == {
        frozenset("1"), frozenset("12"), frozenset("34"), frozenset("1234"), frozenset("e")
    }
    comps = {frozenset(four_roots.ids(c.vertices)) for c in hypergraph_components(h, four_roots)}
    assert comps == {frozenset("1234"), frozenset("e")}


def test_classify_order(four_roots):
    # r1 has a single non-connector child, so the first rule fires
    tag = classify(four_roots, full_subproblem(four_roots))
    assert tag.case is Case.UP and tag.root == 0


def test_merge_split_of_root_children(four_roots):
    g = four_roots
    keep = [v for v in g.vertices if v not in ("r1", "a")]
    s = make_subproblem(g, keep, roots=["a1", "r2", "r3", "r4"])
    assert verify_admissible(g, s)
    assert classify(g, s).case is Case.MERGE
    split = apply_merge(g, s)
    roots = {"a1", "r2", "r3", "r4"}
    left, right = set(split.left.vertices(g)), set(split.right.vertices(g))
    assert left & right == roots
    assert left | right == set(s.vertices(g))
    side_e = left if "e" in left else right
    assert "1" not in side_e and "d" not in side_e


def test_include_rule():
    g = Digraph(["r1", "r2", "c", "x", "y"], [("r1", "c"), ("r2", "c"), ("c", "x"), ("c", "y")])
    s = full_subproblem(g)
    tag = classify(g, s)
    assert tag.case is Case.INCLUDE and tag.group == (0, 1)


def test_include_alignment_wide():
    roots = list("abdefghi")
    edges = [(r, "c") for r in "defg"] + [(r, f"{r}x") for r in "abhi"]
    edges += [("c", "cx"), ("c", "cy")]
    verts = roots + ["c", "cx", "cy"] + [f"{r}x" for r in "abhi"]
    g = Digraph(verts, edges)
    s = make_subproblem(g, verts, roots=roots)
    split = apply_include(g, s, (2, 3, 4, 5), g.idx("c"))
    assert split.left.local_roots(g) == list("abchi")
    assert split.align_left == (0, 1, 2, 2, 2, 2, 3, 4)
    assert split.right.kind is Kind.TRIVIAL


def test_tree_is_single_leaf():
    tree = decompose(load("path.txt"))
    assert len(tree.nodes) == 1
    assert tree.root.kind is Kind.BASE_TREE


def test_rejects_bad_inputs():
    with pytest.raises(ValidationError) as e:
        decompose(load("tangle.txt"))
    assert e.value.check == "untangled"
    with pytest.raises(ValidationError) as e:
        decompose(load("diamond.txt"))
    assert e.value.check == "multitree"


def test_structure_over_corpus():
    for g, rho in corpus(count=120, seed=11):
        if rho != 1:
            continue
        tree = decompose(g)
        merges = 0
        for node in tree.nodes:
            if node.is_leaf():
                assert node.kind in (Kind.TRIVIAL, Kind.BASE_TREE, Kind.BASE_DISCRETE)
                continue
            assert verify_admissible(g, node.sub)
            left, right = node.children
            assert left.sub.mask | right.sub.mask == node.sub.mask
            merges += node.case is Case.MERGE
        assert merges <= g.connector_mask.bit_count()


def test_to_json_shape(four_roots):
    d = decompose(four_roots).to_dict()
    assert d["nodes"][0]["case"] == "UP"
    assert {"id", "kind", "vertices", "local_roots", "children"} <= set(d["nodes"][0])
