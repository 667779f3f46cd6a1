"""Lexico-minimum placements on arborescences via post-order knapsack.

Each vertex's table maps a replica count ``x`` to the best packed aggregate
of its subtree and the leaf set achieving it. A vertex combines its
children's tables by lex-min convolution and then adds its own failure
number, which is exactly ``x``. Lex order is compatible with addition, so
optimal sub-tables compose into optimal tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .graph import Digraph, iter_bits
from .lexvec import INF, Packing

# (packed aggregate, sorted tuple of placed leaf indexes)
Entry = tuple[int, tuple[int, ...]]


def tree_tables(
    g: Digraph, root: int, mask: int, placeable: int, x_max: int, packing: Packing
) -> list[Entry]:
    """Best ``(packed aggregate, leaves)`` per count ``x`` for the subtree of ``root``.

    The subtree is the part of ``g`` induced by ``mask`` below ``root``; only
    vertices in ``placeable`` may receive replicas. The returned list is
    truncated where counts become infeasible.
    """
    pw = packing.pow
    order = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(w for w in g.succ[v] if (mask >> w) & 1)

    tables: dict[int, list[Entry]] = {}
    for v in reversed(order):
        kids = [w for w in g.succ[v] if (mask >> w) & 1]
        if not kids:
            if (placeable >> v) & 1 and x_max >= 1:
                tables[v] = [(pw[0], ()), (pw[1], (v,))]
            else:
                tables[v] = [(pw[0], ())]
            continue
        acc: list[Entry] = [(0, ())]
        for w in kids:
            acc = _convolve(acc, tables.pop(w), x_max)
        tables[v] = [(agg + pw[x], leaves) for x, (agg, leaves) in enumerate(acc)]
    return tables[root]


def _convolve(a: list[Entry], b: list[Entry], x_max: int) -> list[Entry]:
    out: list[Entry | None] = [None] * min(len(a) + len(b) - 1, x_max + 1)
    for i, (va, la) in enumerate(a):
        for j, (vb, lb) in enumerate(b):
            x = i + j
            if x > x_max:
                break
            cand = (va + vb, tuple(sorted(la + lb)))
            cur = out[x]
            if cur is None or cand < cur:
                out[x] = cand
    return out  # type: ignore[return-value]


@dataclass(frozen=True)
class TreeTable:
    """Per replica count: lex-min aggregate (length ``rho + 1``) and a leaf set."""

    rho: int
    aggregates: tuple
    leaf_sets: tuple

    def aggregate(self, x: int):
        return self.aggregates[x] if 0 <= x < len(self.aggregates) else INF

    def leaves(self, x: int):
        return self.leaf_sets[x] if 0 <= x < len(self.leaf_sets) else None


def solve_tree(t: Digraph, x_max: int, rho: int) -> TreeTable:
    """Lex-min aggregate of ``t`` for every replica count ``0..x_max``.

    ``t`` must be an arborescence. Every vertex of ``t`` is counted. Counts
    above the number of leaves come back as ``INF``.
    """
    roots = list(iter_bits(t.root_mask))
    if len(roots) != 1:
        raise InputError(f"expected a single root, found {len(roots)}")
    if any(len(ps) > 1 for ps in t.pred) or t.topological_order is None:
        raise InputError("not an arborescence")
    if not 0 <= x_max <= rho:
        raise InputError(f"x_max={x_max} must lie in [0, rho={rho}]")
    packing = Packing(rho, len(t) + 1)
    table = tree_tables(t, roots[0], t.all_mask, t.leaf_mask, x_max, packing)
    aggs = [INF] * (x_max + 1)
    sets: list = [None] * (x_max + 1)
    for x, (agg, leaves) in enumerate(table):
        aggs[x] = packing.unpack(agg)
        sets[x] = frozenset(t.vertices[i] for i in leaves)
    return TreeTable(rho, tuple(aggs), tuple(sets))
