import pytest

from lexplace.decomposer import Case, decompose
from lexplace.dp import Solver, include_signature, merge_correction, solve, subproblem_state
from lexplace.errors import InputError
from lexplace.graph import failure_aggregate
from lexplace.oracle import brute_force_lsp

from conftest import corpus


def test_canonical_model(canonical):
    sol = solve(canonical, 2)
    assert sol.aggregate == (2, 5, 1)
    assert set(sol.placement) in ({"f", "g"}, {"f", "h"})


def test_rho_bounds(canonical):
    with pytest.raises(InputError):
        solve(canonical, 3)
    with pytest.raises(InputError):
        solve(canonical, -1)


def test_include_signature_lift():
    beta = (3, 2, 1, 4, 3)
    in_group = (False, False, True, True, True, True, False, False)
    pi = (0, 1, None, None, None, None, 3, 4)
    assert include_signature(beta, in_group, pi, 2) == (3, 2, 1, 1, 1, 1, 4, 3)


def test_merge_correction_sums_to_minus_one_per_root():
    corr = merge_correction((1, 0, 2), (0, 1, 1), 3)
    assert sum(corr) == -3
    # roots with counts 1+0 and 0+1 lose a zero; 2+1 trades a 2 and a 1 for a 3
    assert corr == (1, -1, -1, -2)


def test_four_roots_against_oracle(four_roots):
    for rho in range(1, 5):
        best, winners = brute_force_lsp(four_roots, rho)
        sol = solve(four_roots, rho)
        assert sol.aggregate == best
        assert frozenset(sol.placement) in winners


def test_every_table_cell_is_realizable():
    """Backtrack each cell and re-evaluate it inside its own subproblem."""
    for g, rho in corpus(count=40, seed=3, max_n=11):
        tree = decompose(g)
        solver = Solver(g, tree, rho)
        solver.run()
        for node in tree.postorder():
            if node.id not in solver.tables:
                continue
            for key, packed in solver.tables[node.id].cells.items():
                leaves = solver.placement(node, key)
                agg, sig = subproblem_state(g, node, leaves, rho)
                assert len(leaves) == key[0]
                assert sig == key[1]
                assert solver.packing.pack(agg) == packed


def test_matches_oracle_on_corpus():
    cases = set()
    for g, rho in corpus(count=100, seed=17):
        sol = solve(g, rho)
        best, _ = brute_force_lsp(g, rho)
        assert sol.aggregate == best
        assert failure_aggregate(g, sol.placement, rho) == best
        cases |= {c for c, n in sol.stats["cases"].items() if n}
    assert {c.value for c in (Case.UP, Case.OUT, Case.INCLUDE, Case.MERGE)} <= cases


def test_solution_json(canonical):
    d = solve(canonical, 1).to_dict()
    assert d["aggregate"] == list(solve(canonical, 1).aggregate)
    assert {"tau_nodes", "table_cells", "cases", "wall_time"} <= set(d["stats"])
