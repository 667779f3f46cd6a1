import networkx as nx
import pytest

from lexplace.errors import ValidationError
from lexplace.graph import is_multitree, is_untangled
from lexplace.hardness import (
    ROOTS,
    BoundVector,
    brute_force_coloring,
    build_reduction,
    check_coloring,
    check_reduction_equivalence,
    independence_bound,
    random_colorable_cubic,
    read_coloring,
    read_undirected,
    vertex_node,
)
from lexplace.oracle import brute_force_independent_set


@pytest.fixture
def cubic8(data_dir):
    return read_undirected(data_dir / "cubic8.txt"), read_coloring(data_dir / "cubic8.coloring")


def test_reduction_shape(cubic8):
    g, coloring = cubic8
    h = build_reduction(g, coloring)
    assert len(h) == 8 + 12 + 3
    assert set(h.ids(h.root_mask)) == set(ROOTS)
    assert all(len(h.succ[h.idx(r)]) == 4 for r in ROOTS)
    assert set(h.ids(h.leaf_mask)) == {vertex_node(v) for v in g.nodes()}
    assert is_multitree(h)


def test_k4(data_dir):
    g = read_undirected(data_dir / "k4.txt")
    coloring = brute_force_coloring(g)
    assert coloring is not None
    h = build_reduction(g, coloring)
    assert len(h) == 13
    assert check_reduction_equivalence(g, 1, coloring)
    assert check_reduction_equivalence(g, 2, coloring)
    assert not brute_force_independent_set(g.nodes(), g.edges(), 2)


def test_bad_inputs(cubic8):
    g, coloring = cubic8
    bad = dict(coloring)
    key = next(iter(bad))
    u = next(iter(key))
    same = [k for k in bad if u in k and k != key][0]
    bad[key] = bad[same]
    with pytest.raises(ValidationError) as e:
        check_coloring(g, bad)
    assert e.value.check == "coloring"
    pendant = nx.Graph([(0, 1), (1, 2), (2, 0), (2, 3)])
    with pytest.raises(ValidationError) as e:
        brute_force_coloring(pendant)
    assert e.value.check == "cubic"


def test_coloring_found_for_eight_vertex_graph(cubic8):
    g, _ = cubic8
    found = brute_force_coloring(g)
    check_coloring(g, found)


def test_bound_vector():
    b = independence_bound(4)
    assert b.to_json() == [3, 0, 0, "inf", "inf"]
    assert b.admits((3, 0, 0, 99, 99))
    assert b.admits((2, 9, 9, 9, 9))
    assert not b.admits((3, 1, 0, 0, 0))
    assert BoundVector((), 2).admits((7, 7))
    with pytest.raises(ValueError):
        b.admits((3, 0))


def test_random_cubic_reductions_are_multitrees():
    for seed in range(50):
        g, coloring = random_colorable_cubic(2 * (2 + seed % 5), seed)
        h = build_reduction(g, coloring)
        assert is_multitree(h)
        assert h.root_mask.bit_count() == 3


def test_reduction_is_tangled(cubic8):
    # colour-class roots share vertex nodes in overlapping patterns
    v = is_untangled(build_reduction(*cubic8))
    assert not v and v.kind == "tangle"


def test_equivalence_cubic8(cubic8):
    g, coloring = cubic8
    for k in range(1, 5):
        assert check_reduction_equivalence(g, k, coloring)
