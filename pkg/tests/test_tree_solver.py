import random

import pytest

from lexplace.errors import InputError
from lexplace.generate import random_multitree
from lexplace.graph import Digraph, failure_aggregate
from lexplace.lexvec import INF
from lexplace.oracle import brute_force_lsp
from lexplace.tree_solver import solve_tree

from conftest import load


def test_path_tree_table():
    t = load("path.txt")
    table = solve_tree(t, 3, 3)
    # leaves t, v, w; one replica anywhere leaves r and s at failure number 1
    assert table.aggregate(0) == (0, 0, 0, 6)
    assert table.aggregate(1) == (0, 0, 3, 3)
    assert table.leaves(1) == {"t"}
    assert table.aggregate(3) == (2, 1, 3, 0)
    assert table.aggregate(4) is INF


def test_beyond_leaf_count_is_inf():
    t = Digraph("rab", [("r", "a"), ("r", "b")])
    table = solve_tree(t, 3, 3)
    assert table.aggregate(3) is INF
    assert table.leaves(3) is None


def test_rejects_non_trees(four_roots):
    with pytest.raises(InputError):
        solve_tree(four_roots, 2, 2)
    with pytest.raises(InputError):
        solve_tree(load("diamond.txt"), 1, 1)
    with pytest.raises(InputError):
        solve_tree(load("path.txt"), 3, 2)


def test_matches_enumeration_on_random_trees():
    rng = random.Random(5)
    for seed in range(60):
        t = random_multitree(1, rng.randint(2, 14), seed)
        n_leaves = t.leaf_mask.bit_count()
        rho = min(4, n_leaves)
        table = solve_tree(t, rho, rho)
        for x in range(rho + 1):
            agg = table.aggregate(x)
            placed = table.leaves(x)
            # a table entry at x < rho counts x replicas against a length rho + 1 vector
            assert failure_aggregate(t, placed, rho) == agg
        best, _ = brute_force_lsp(t, rho)
        assert table.aggregate(rho) == best
