"""Exhaustive reference solvers. Deliberately naive: enumerate, evaluate, keep the best."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Hashable, Iterable

from .errors import InputError
from .graph import Digraph, iter_bits

DEFAULT_CAP = 2_000_000


def _aggregate(reach: tuple[int, ...], pmask: int, rho: int) -> tuple[int, ...]:
    agg = [0] * (rho + 1)
    for m in reach:
        agg[rho - (m & pmask).bit_count()] += 1
    return tuple(agg)


def brute_force_lsp(g: Digraph, rho: int, cap: int = DEFAULT_CAP) -> tuple[tuple[int, ...], list[frozenset]]:
    """Lex-min aggregate over every ``rho``-subset of leaves and all subsets attaining it.

    Argmins are returned sorted by their vertex-order index tuples.
    """
    leaves = list(iter_bits(g.leaf_mask))
    if not 0 <= rho <= len(leaves):
        raise InputError(f"rho={rho} outside [0, {len(leaves)}]")
    count = comb(len(leaves), rho)
    if count > cap:
        raise InputError(f"{count} placements exceed the enumeration cap {cap}")
    reach = g.reach
    best = None
    winners: list[tuple[int, ...]] = []
    for subset in combinations(leaves, rho):
        pmask = 0
        for v in subset:
            pmask |= 1 << v
        agg = _aggregate(reach, pmask, rho)
        if best is None or agg < best:
            best = agg
            winners = [subset]
        elif agg == best:
            winners.append(subset)
    winners.sort()
    vs = g.vertices
    return best, [frozenset(vs[i] for i in w) for w in winners]


def brute_force_independent_set(
    vertices: Iterable[Hashable], edges: Iterable[tuple], k: int, cap: int = DEFAULT_CAP
) -> bool:
    """True iff some ``k`` vertices are pairwise non-adjacent."""
    vertices = list(vertices)
    if k < 0:
        raise InputError("k must be non-negative")
    if k > len(vertices):
        return False
    if comb(len(vertices), k) > cap:
        raise InputError(f"C({len(vertices)}, {k}) exceeds the enumeration cap {cap}")
    adjacent = {frozenset(e) for e in edges}
    for subset in combinations(vertices, k):
        if all(frozenset(p) not in adjacent for p in combinations(subset, 2)):
            return True
    return False
