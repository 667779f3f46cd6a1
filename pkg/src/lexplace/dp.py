"""Bottom-up evaluation of lex-min aggregates over a decomposition tree.

For a subproblem with local roots ``q_1..q_k`` a table cell ``(r, sig)``
holds the lex-min packed aggregate (see :mod:`lexplace.lexvec`) over all
placements of ``r`` replicas on the subproblem's leaves whose ancestry
signature is ``sig``: ``sig[i]`` counts replicas below ``q_i``. Aggregates
count every vertex of the subproblem with failure numbers taken inside its
induced subgraph. Missing cells are infeasible.

Each combine step only corrects the failure numbers of local roots, the one
place where child subproblems disagree with their parent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations

from .decomposer import Case, DecompNode, DecompTree, Kind, decompose
from .errors import InputError, InvariantViolation
from .graph import Digraph, aggregate_from_numbers, failure_numbers
from .lexvec import Packing
from .tree_solver import tree_tables

Key = tuple[int, tuple[int, ...]]


@dataclass
class DpTable:
    """Sparse cells ``(r, signature) -> packed aggregate`` with backtracking choices."""

    cells: dict[Key, int] = field(default_factory=dict)
    choice: dict[Key, tuple] = field(default_factory=dict)

    def offer(self, key: Key, value: int, why: tuple) -> None:
        cur = self.cells.get(key)
        if cur is None or value < cur:
            self.cells[key] = value
            self.choice[key] = why

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, key) -> bool:
        return key in self.cells

    def aggregate(self, key: Key, packing: Packing):
        return packing.unpack(self.cells[key])


# ---------------------------------------------------------------- base tables

def table_base_tree(g: Digraph, node: DecompNode, packing: Packing) -> DpTable:
    (root,) = node.sub.roots
    mask = node.sub.mask
    t = DpTable()
    entries = tree_tables(g, root, mask, mask & g.leaf_mask, packing.rho, packing)
    for x, (agg, leaves) in enumerate(entries):
        t.cells[(x, (x,))] = agg
        t.choice[(x, (x,))] = ("leaves", leaves)
    return t


def table_base_discrete(g: Digraph, node: DecompNode, packing: Packing) -> DpTable:
    """Isolated local roots; placing on a leaf root gives it failure number 1."""
    roots = node.sub.roots
    k = len(roots)
    pw = packing.pow
    slots = [i for i, r in enumerate(roots) if (g.leaf_mask >> r) & 1]
    t = DpTable()
    for r in range(min(len(slots), packing.rho) + 1):
        for chosen in combinations(slots, r):
            sig = [0] * k
            for i in chosen:
                sig[i] = 1
            key = (r, tuple(sig))
            t.cells[key] = r * pw[1] + (k - r) * pw[0]
            t.choice[key] = ("leaves", tuple(roots[i] for i in chosen))
    return t


def table_trivial(node: DecompNode, packing: Packing) -> DpTable:
    """Leafless subproblem seen on its own: every vertex has failure number 0."""
    t = DpTable()
    key = (0, (0,) * len(node.sub.roots))
    t.cells[key] = len(node.sub) * packing.pow[0]
    t.choice[key] = ("leaves", ())
    return t


# ---------------------------------------------------------------- recurrences

def _gather(sig: tuple[int, ...], align: tuple[int | None, ...]) -> tuple[int, ...]:
    return tuple(sig[a] for a in align)


def recur_up(child: DpTable, align: tuple[int, ...], i: int, packing: Packing) -> DpTable:
    """Add the failure number of the peeled root ``q_i``."""
    pw = packing.pow
    t = DpTable()
    for key in sorted(child.cells):
        r, beta = key
        alpha = _gather(beta, align)
        t.offer((r, alpha), child.cells[key] + pw[alpha[i]], ("child", key))
    return t


def recur_out(child: DpTable, tree: DpTable, i: int, packing: Packing) -> DpTable:
    """Split the replicas under ``q_i`` between the rest and the detached tree."""
    pw = packing.pow
    rho = packing.rho
    branch = sorted((key[0], v) for key, v in tree.cells.items())
    t = DpTable()
    for key in sorted(child.cells):
        r, a = key
        base = child.cells[key] - pw[a[i]]
        for x, tv in branch:
            if r + x > rho:
                break
            ai = a[i] + x
            alpha = a[:i] + (ai,) + a[i + 1:]
            t.offer((r + x, alpha), base + tv + pw[ai], ("split", key, x))
    return t


def include_signature(beta: tuple[int, ...], in_group: tuple[bool, ...],
                      pi: tuple[int | None, ...], ell: int) -> tuple[int, ...]:
    """Lift a child signature to the parent: grouped roots copy ``beta[ell]``,
    the rest copy ``beta[pi[i]]`` (positions are 0-based)."""
    return tuple(beta[ell] if grouped else beta[p] for grouped, p in zip(in_group, pi))


def recur_include(child: DpTable, align: tuple[int, ...], group: tuple[int, ...],
                  packing: Packing) -> DpTable:
    """Grouped roots all sit directly above the shared child ``s_ell``."""
    pw = packing.pow
    ell = align[group[0]]
    size = len(group)
    t = DpTable()
    for key in sorted(child.cells):
        r, beta = key
        alpha = _gather(beta, align)
        t.offer((r, alpha), child.cells[key] + size * pw[beta[ell]], ("child", key))
    return t


def _by_count(table: DpTable) -> dict[int, list[tuple[tuple[int, ...], int, Key]]]:
    out: dict[int, list] = {}
    for key in sorted(table.cells):
        out.setdefault(key[0], []).append((key[1], table.cells[key], key))
    return out


def recur_merge(left: DpTable, right: DpTable, packing: Packing) -> DpTable:
    """Both sides hold all local roots; correct every root's failure number once."""
    pw = packing.pow
    rho = packing.rho
    rights = _by_count(right)
    # per-cell sum of root contributions, subtracted before re-adding the merged ones
    rroot = {key: sum(pw[a] for a in key[1]) for key in right.cells}
    t = DpTable()
    cells, choice = t.cells, t.choice
    for lkey in sorted(left.cells):
        r1, a1 = lkey
        lbase = left.cells[lkey] - sum(pw[a] for a in a1)
        for r2 in range(rho - r1 + 1):
            for a2, v2, rkey in rights.get(r2, ()):
                alpha = tuple(x + y for x, y in zip(a1, a2))
                val = lbase + v2 - rroot[rkey] + sum(pw[a] for a in alpha)
                key = (r1 + r2, alpha)
                cur = cells.get(key)
                if cur is None or val < cur:
                    cells[key] = val
                    choice[key] = ("pair", lkey, rkey)
    return t


def merge_correction(alpha1: tuple[int, ...], alpha2: tuple[int, ...], rho: int) -> tuple[int, ...]:
    """Unpacked correction vector sum_i e(a1_i + a2_i) - e(a1_i) - e(a2_i)."""
    out = [0] * (rho + 1)
    for x, y in zip(alpha1, alpha2):
        out[rho - (x + y)] += 1
        out[rho - x] -= 1
        out[rho - y] -= 1
    return tuple(out)


def recur_split(left: DpTable, right: DpTable, align_left, align_right, packing: Packing) -> DpTable:
    """Disconnected halves: aggregates add, signatures interleave."""
    rho = packing.rho
    rights = _by_count(right)
    t = DpTable()
    for lkey in sorted(left.cells):
        r1, a1 = lkey
        v1 = left.cells[lkey]
        for r2 in range(rho - r1 + 1):
            for a2, v2, rkey in rights.get(r2, ()):
                alpha = tuple(a1[p] if p is not None else a2[q] for p, q in zip(align_left, align_right))
                t.offer((r1 + r2, alpha), v1 + v2, ("pair", lkey, rkey))
    return t


# ---------------------------------------------------------------- driver

@dataclass
class Solution:
    placement: list
    aggregate: tuple[int, ...]
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "placement": [str(v) for v in self.placement],
            "aggregate": list(self.aggregate),
            "stats": self.stats,
        }


class Solver:
    """Tables for every node of one decomposition tree at one replica count."""

    def __init__(self, g: Digraph, tree: DecompTree, rho: int):
        self.g = g
        self.tree = tree
        self.rho = rho
        self.packing = Packing(rho, len(g) + 1)
        self.tables: dict[int, DpTable] = {}

    def table(self, node: DecompNode) -> DpTable:
        if node.kind is Kind.TRIVIAL:
            return table_trivial(node, self.packing)
        return self.tables[node.id]

    def run(self) -> DpTable:
        g, pk = self.g, self.packing
        for node in self.tree.postorder():
            if node.kind is Kind.TRIVIAL:
                continue
            if node.kind is Kind.BASE_TREE:
                t = table_base_tree(g, node, pk)
            elif node.kind is Kind.BASE_DISCRETE:
                t = table_base_discrete(g, node, pk)
            else:
                t = self._combine(node)
            cap = (self.rho + 1) ** (len(node.sub.roots) + 1)
            if len(t) > cap:
                raise InvariantViolation(f"table with {len(t)} cells exceeds cap {cap}")
            self.tables[node.id] = t
        return self.table(self.tree.root)

    def _combine(self, node: DecompNode) -> DpTable:
        left, right = node.children
        al, ar = node.align
        tag = node.tag
        pk = self.packing
        if tag.case is Case.UP:
            return recur_up(self.table(left), al, tag.root, pk)
        if tag.case is Case.OUT:
            return recur_out(self.table(left), self.table(right), tag.root, pk)
        if tag.case is Case.INCLUDE:
            return recur_include(self.table(left), al, tag.group, pk)
        if tag.case is Case.MERGE:
            return recur_merge(self.table(left), self.table(right), pk)
        if tag.case is Case.SPLIT:
            return recur_split(self.table(left), self.table(right), al, ar, pk)
        raise InvariantViolation(f"unknown case {tag.case}")  # pragma: no cover

    def placement(self, node: DecompNode, key: Key) -> list[int]:
        """Leaf indexes of the placement realizing ``key`` in ``node``'s table."""
        out: list[int] = []
        stack = [(node, key)]
        while stack:
            nd, k = stack.pop()
            why = self.table(nd).choice[k]
            if why[0] == "leaves":
                out.extend(why[1])
            elif why[0] == "child":
                stack.append((nd.children[0], why[1]))
            elif why[0] == "split":
                _, ck, x = why
                stack.append((nd.children[0], ck))
                stack.append((nd.children[1], (x, (x,))))
            else:
                _, lk, rk = why
                stack.append((nd.children[0], lk))
                stack.append((nd.children[1], rk))
        return sorted(out)


def subproblem_state(g: Digraph, node: DecompNode, leaves: list[int], rho: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Direct aggregate and signature of a placement inside ``node``'s subproblem."""
    pmask = sum(1 << v for v in leaves)
    nums = failure_numbers(g, pmask, within=node.sub.mask)
    return aggregate_from_numbers(nums, rho), tuple(nums[r] for r in node.sub.roots)


def solve(g: Digraph, rho: int, tree: DecompTree | None = None) -> Solution:
    """Lexico-minimum placement of ``rho`` replicas on the leaves of ``g``."""
    started = time.perf_counter()
    n_leaves = g.leaf_mask.bit_count()
    if rho < 0 or rho >= n_leaves:
        raise InputError(f"rho={rho} must satisfy 0 <= rho < {n_leaves} (number of leaves)")
    if tree is None:
        tree = decompose(g, rho)
    solver = Solver(g, tree, rho)
    top = solver.run()
    finals = sorted(k for k in top.cells if k[0] == rho)
    if not finals:
        raise InvariantViolation(f"no feasible cell for rho={rho}")
    best = min(finals, key=lambda k: (top.cells[k], k))
    leaves = solver.placement(tree.root, best)
    aggregate = solver.packing.unpack(top.cells[best])
    pmask = sum(1 << v for v in leaves)
    direct = aggregate_from_numbers(failure_numbers(g, pmask), rho)
    if len(leaves) != rho or direct != aggregate:
        raise InvariantViolation(
            f"backtracked placement re-evaluates to {direct}, table says {aggregate}"
        )
    stats = {
        "tau_nodes": len(tree.nodes),
        "table_cells": sum(len(t) for t in solver.tables.values()),
        "cases": tree.case_counts(),
        "wall_time": time.perf_counter() - started,
    }
    return Solution([g.vertices[v] for v in leaves], aggregate, stats)
