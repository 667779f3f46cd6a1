"""Instance generator turning 3-edge-coloured cubic graphs into 3-multitrees.

Every vertex and edge of the cubic graph becomes a vertex of the multitree;
each edge node points at its two endpoints, and three roots point at the
edge nodes of their colour class. A placement on the vertex nodes then stays
under the bound ``<3, 0, ..., 0, *, *>`` exactly when it is an independent
set of the cubic graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path

import networkx as nx

from .errors import InputError, InvariantViolation, ValidationError
from .graph import Digraph, is_multitree
from .oracle import DEFAULT_CAP, brute_force_independent_set

ROOTS = ("alpha", "beta", "gamma")

Coloring = dict  # frozenset({u, v}) -> colour in {1, 2, 3}


def _edge_key(u, v) -> frozenset:
    return frozenset((u, v))


def check_cubic(g: nx.Graph) -> None:
    for v, d in g.degree():
        if d != 3:
            raise ValidationError("cubic", (v,), f"vertex {v!r} has degree {d}, expected 3")
    if any(u == v for u, v in g.edges()):
        raise ValidationError("cubic", (), "self-loop in cubic graph")


def check_coloring(g: nx.Graph, coloring: Coloring) -> None:
    for u, v in g.edges():
        c = coloring.get(_edge_key(u, v))
        if c not in (1, 2, 3):
            raise ValidationError("coloring", (u, v), f"edge {u}-{v} has colour {c!r}")
    for v in g.nodes():
        seen: dict[int, object] = {}
        for w in g.neighbors(v):
            c = coloring[_edge_key(v, w)]
            if c in seen:
                raise ValidationError("coloring", (v, seen[c], w),
                                      f"edges {v}-{seen[c]} and {v}-{w} share colour {c}")
            seen[c] = w


def brute_force_coloring(g: nx.Graph, max_edges: int = 24) -> Coloring | None:
    """A proper 3-edge-colouring by backtracking, or None if none exists."""
    check_cubic(g)
    edges = [tuple(e) for e in g.edges()]
    if len(edges) > max_edges:
        raise InputError(f"{len(edges)} edges exceed the search limit {max_edges}")
    # edges sharing a vertex with an already-coloured edge first keeps pruning tight
    order = list(nx.edge_bfs(g)) if edges else []
    order = [(u, v) for u, v in order] + [e for e in edges if _edge_key(*e) not in {_edge_key(*o) for o in order}]
    used: dict = {v: set() for v in g.nodes()}
    coloring: Coloring = {}

    def place(i: int) -> bool:
        if i == len(order):
            return True
        u, v = order[i]
        for c in (1, 2, 3):
            if c in used[u] or c in used[v]:
                continue
            used[u].add(c)
            used[v].add(c)
            coloring[_edge_key(u, v)] = c
            if place(i + 1):
                return True
            used[u].discard(c)
            used[v].discard(c)
            del coloring[_edge_key(u, v)]
        return False

    return dict(coloring) if place(0) else None


def vertex_node(v) -> str:
    return f"v_{v}"


def edge_node(u, v) -> str:
    a, b = sorted((str(u), str(v)))
    return f"e_{a}_{b}"


def build_reduction(g: nx.Graph, coloring: Coloring) -> Digraph:
    """The 3-multitree for cubic graph ``g`` under a proper 3-edge-colouring."""
    check_cubic(g)
    check_coloring(g, coloring)
    vertices = list(ROOTS)
    edges = []
    enodes = []
    for u, v in g.edges():
        e = edge_node(u, v)
        enodes.append(e)
        edges.append((ROOTS[coloring[_edge_key(u, v)] - 1], e))
    vertices.extend(enodes)
    vertices.extend(vertex_node(v) for v in g.nodes())
    for u, v in g.edges():
        e = edge_node(u, v)
        edges.append((e, vertex_node(u)))
        edges.append((e, vertex_node(v)))
    h = Digraph(vertices, edges)
    verdict = is_multitree(h)
    if not verdict:
        raise InvariantViolation(f"reduction produced a non-multitree: {verdict.kind} {verdict.witness}")
    if h.root_mask.bit_count() != 3:
        raise InvariantViolation("reduction must have exactly three roots")
    return h


@dataclass(frozen=True)
class BoundVector:
    """Lexicographic upper bound whose trailing ``wildcards`` entries are unbounded."""

    prefix: tuple[int, ...]
    wildcards: int

    def __len__(self) -> int:
        return len(self.prefix) + self.wildcards

    def admits(self, agg) -> bool:
        """``agg <=_L bound``; reaching a wildcard with an equal prefix means below."""
        if len(agg) != len(self):
            raise ValueError(f"length mismatch: {len(agg)} vs {len(self)}")
        for x, w in zip(agg, self.prefix):
            if x != w:
                return x < w
        return True

    def to_json(self) -> list:
        return list(self.prefix) + ["inf"] * self.wildcards


def independence_bound(rho: int) -> BoundVector:
    """``<3, 0, ..., 0, inf, inf>`` of length ``rho + 1``; wildcards win on overlap."""
    length = rho + 1
    wild = min(2, length)
    fixed = length - wild
    prefix = ([3] + [0] * (fixed - 1)) if fixed else []
    return BoundVector(tuple(prefix), wild)


def check_reduction_equivalence(g: nx.Graph, k: int, coloring: Coloring | None = None,
                                cap: int = DEFAULT_CAP) -> bool:
    """Whether "some k vertex nodes stay under the bound" agrees with "G has a k-independent set"."""
    if coloring is None:
        coloring = brute_force_coloring(g)
        if coloring is None:
            raise InputError("graph has no proper 3-edge-colouring")
    h = build_reduction(g, coloring)
    bound = independence_bound(k)
    leaves = [h.idx(vertex_node(v)) for v in g.nodes()]
    if comb(len(leaves), k) > cap:
        raise InputError(f"C({len(leaves)}, {k}) exceeds the enumeration cap {cap}")
    reach = h.reach
    placed = False
    for subset in combinations(leaves, k):
        pmask = sum(1 << v for v in subset)
        agg = [0] * (k + 1)
        for m in reach:
            agg[k - (m & pmask).bit_count()] += 1
        if bound.admits(agg):
            placed = True
            break
    return placed == brute_force_independent_set(g.nodes(), g.edges(), k, cap)


# ---------------------------------------------------------------- files

def read_undirected(path: str | Path) -> nx.Graph:
    """Undirected graph in the edge-list text format."""
    g = nx.Graph()
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) == 1:
            g.add_node(toks[0])
        elif len(toks) == 2:
            if g.has_edge(*toks):
                raise InputError(f"line {lineno}: duplicate edge {toks[0]}-{toks[1]}")
            g.add_edge(*toks)
        else:
            raise InputError(f"line {lineno}: cannot parse {raw!r}")
    return g


def read_coloring(path: str | Path) -> Coloring:
    """Lines ``u v c`` with colour ``c`` in 1..3."""
    coloring: Coloring = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 3 or toks[2] not in ("1", "2", "3"):
            raise InputError(f"line {lineno}: expected 'u v c' with c in 1..3, got {raw!r}")
        coloring[_edge_key(toks[0], toks[1])] = int(toks[2])
    return coloring


def format_coloring(g: nx.Graph, coloring: Coloring) -> str:
    return "".join(f"{u} {v} {coloring[_edge_key(u, v)]}\n" for u, v in g.edges())


def random_colorable_cubic(n: int, seed: int, attempts: int = 100) -> tuple[nx.Graph, Coloring]:
    """A random simple cubic graph on ``n`` vertices that admits a 3-edge-colouring."""
    for i in range(attempts):
        g = nx.random_regular_graph(3, n, seed=seed * 1000 + i)
        coloring = brute_force_coloring(g)
        if coloring is not None:
            return g, coloring
    raise InputError(f"no 3-edge-colourable cubic graph found in {attempts} attempts")
