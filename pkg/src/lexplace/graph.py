"""Failure-domain digraphs: storage, reachability, structural checks, aggregates.

Vertex sets are handled internally as Python ints used as bitmasks, bit ``i``
standing for ``g.vertices[i]``. Public functions take and return vertex ids.
Reachability is reflexive throughout: every vertex reaches itself.
"""

from __future__ import annotations

import graphlib
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import InputError

_TOKEN = re.compile(r"[A-Za-z0-9_]+\Z")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Digraph:
    """Immutable directed graph with first-seen vertex order.

    Edges may mention vertices not listed in ``vertices``; those are appended
    in order of first appearance. Self-loops and duplicate edges are rejected.
    """

    def __init__(self, vertices: Iterable[Hashable] = (), edges: Iterable[tuple] = ()):
        order: list = []
        index: dict = {}

        def intern(v):
            if v not in index:
                index[v] = len(order)
                order.append(v)
            return index[v]

        for v in vertices:
            if v in index:
                raise InputError(f"duplicate vertex {v!r}")
            intern(v)
        pairs = []
        seen = set()
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop on {u!r}")
            iu, iv = intern(u), intern(v)
            if (iu, iv) in seen:
                raise InputError(f"duplicate edge {u!r} -> {v!r}")
            seen.add((iu, iv))
            pairs.append((iu, iv))

        n = len(order)
        succ: list[list[int]] = [[] for _ in range(n)]
        pred: list[list[int]] = [[] for _ in range(n)]
        for iu, iv in pairs:
            succ[iu].append(iv)
            pred[iv].append(iu)

        self.vertices: tuple = tuple(order)
        self.index: dict = index
        self.succ: tuple[tuple[int, ...], ...] = tuple(map(tuple, succ))
        self.pred: tuple[tuple[int, ...], ...] = tuple(map(tuple, pred))
        self.edge_index: tuple[tuple[int, int], ...] = tuple(pairs)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self.index

    def __repr__(self) -> str:
        return f"Digraph(n={len(self)}, m={len(self.edge_index)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and set(self.edges) == set(other.edges)

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), frozenset(self.edges)))

    @property
    def edges(self) -> list[tuple]:
        vs = self.vertices
        return [(vs[u], vs[v]) for u, v in self.edge_index]

    def idx(self, v) -> int:
        try:
            return self.index[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def ids(self, mask: int) -> list:
        """Vertex ids for the bits of ``mask``, in vertex order."""
        vs = self.vertices
        return [vs[i] for i in iter_bits(mask)]

    def mask_of(self, vertices: Iterable) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.idx(v)
        return m

    @cached_property
    def all_mask(self) -> int:
        return (1 << len(self.vertices)) - 1

    @cached_property
    def succ_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in ws) for ws in self.succ)

    @cached_property
    def pred_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in ws) for ws in self.pred)

    @cached_property
    def root_mask(self) -> int:
        return sum(1 << i for i, ps in enumerate(self.pred) if not ps)

    @cached_property
    def leaf_mask(self) -> int:
        return sum(1 << i for i, ws in enumerate(self.succ) if not ws)

    @cached_property
    def connector_mask(self) -> int:
        return sum(1 << i for i, ps in enumerate(self.pred) if len(ps) >= 2)

    @cached_property
    def topological_order(self) -> tuple[int, ...] | None:
        """Vertex indexes parents-first, or None if the graph has a cycle."""
        sorter = graphlib.TopologicalSorter({i: ps for i, ps in enumerate(self.pred)})
        try:
            return tuple(sorter.static_order())
        except graphlib.CycleError:
            return None

    @cached_property
    def reach(self) -> tuple[int, ...]:
        """Reflexive descendant bitmask of every vertex."""
        n = len(self.vertices)
        order = self.topological_order
        out = [0] * n
        if order is not None:
            for v in reversed(order):
                m = 1 << v
                for w in self.succ[v]:
                    m |= out[w]
                out[v] = m
            return tuple(out)
        for s in range(n):
            seen = 1 << s
            stack = [s]
            while stack:
                v = stack.pop()
                fresh = self.succ_mask[v] & ~seen
                seen |= fresh
                stack.extend(iter_bits(fresh))
            out[s] = seen
        return tuple(out)

    def induced(self, mask: int) -> Digraph:
        """The vertex-induced subgraph on ``mask``, keeping vertex order."""
        keep = [self.vertices[i] for i in iter_bits(mask)]
        vs = self.vertices
        edges = [(vs[u], vs[v]) for u, v in self.edge_index if (mask >> u) & 1 and (mask >> v) & 1]
        return Digraph(keep, edges)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a structural check; truthy when the check passed."""

    ok: bool
    kind: str | None = None
    witness: tuple = field(default=())

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------- reachability

def reachable(g: Digraph, u) -> frozenset:
    return frozenset(g.ids(g.reach[g.idx(u)]))


def roots_and_leaves(g: Digraph) -> tuple[frozenset, frozenset]:
    return frozenset(g.ids(g.root_mask)), frozenset(g.ids(g.leaf_mask))


def connectors(g: Digraph) -> frozenset:
    return frozenset(g.ids(g.connector_mask))


def connector_shadow(g: Digraph, u) -> frozenset:
    return frozenset(g.ids(g.reach[g.idx(u)] & g.connector_mask))


def child_shadows(g: Digraph, u) -> list[frozenset]:
    """Connector shadow of each out-neighbour of ``u``, in edge order."""
    return [frozenset(g.ids(g.reach[c] & g.connector_mask)) for c in g.succ[g.idx(u)]]


def _laminar_masks(f1: Sequence[int], f2: Sequence[int]) -> tuple[int, int] | None:
    for a in f1:
        for b in f2:
            common = a & b
            if common and common != a and common != b:
                return a, b
    return None


def laminar_pair(f1: Iterable[Iterable], f2: Iterable[Iterable]) -> bool:
    """True when every cross pair of sets is nested or disjoint."""
    f2 = [frozenset(s) for s in f2]
    for a in map(frozenset, f1):
        for b in f2:
            if a & b and not (a <= b or b <= a):
                return False
    return True


# ---------------------------------------------------------------- structure

def _find_cycle(g: Digraph) -> list:
    sorter = graphlib.TopologicalSorter({i: ps for i, ps in enumerate(g.pred)})
    try:
        sorter.prepare()
    except graphlib.CycleError as exc:
        return [g.vertices[i] for i in exc.args[1]]
    return []


def _path_first_step(g: Digraph, src: int, dst: int) -> int:
    """A child of ``src`` from which ``dst`` is reachable."""
    for c in g.succ[src]:
        if (g.reach[c] >> dst) & 1:
            return c
    raise AssertionError("no path")  # pragma: no cover


def is_multitree(g: Digraph) -> Verdict:
    """Acyclic and diamond-free.

    For every source ``u`` each vertex strictly below ``u`` must have exactly
    one in-neighbour among the descendants of ``u``. The witness is a cycle,
    a three-vertex diamond ``(a, b, c)`` with edge ``a->b``, ``b~>c`` and a
    second ``a~>c`` path, or a four-vertex diamond ``(a, b, c, d)``.
    """
    if g.topological_order is None:
        return Verdict(False, "cycle", tuple(_find_cycle(g)))
    reach = g.reach
    vs = g.vertices
    for u in range(len(vs)):
        below = reach[u]
        for v in iter_bits(below & ~(1 << u)):
            inside = g.pred_mask[v] & below
            if inside & (inside - 1) == 0:
                continue
            p1, p2 = list(iter_bits(inside))[:2]
            if (reach[p1] >> p2) & 1:
                p1, p2 = p2, p1
            if (reach[p2] >> p1) & 1:
                b = _path_first_step(g, p2, p1)
                return Verdict(False, "diamond-1", (vs[p2], vs[b], vs[v]))
            return Verdict(False, "diamond-2", (vs[u], vs[p1], vs[p2], vs[v]))
    return Verdict(True)


def _child_shadow_masks(g: Digraph, u: int) -> list[int]:
    return [g.reach[c] & g.connector_mask for c in g.succ[u]]


def is_untangled(g: Digraph) -> Verdict:
    """Child-shadow families of every incomparable vertex pair form a laminar pair.

    Quadratic pair scan. Witness is the offending pair ``(u, v)``.
    """
    n = len(g.vertices)
    reach = g.reach
    fams = [_child_shadow_masks(g, u) for u in range(n)]
    # a proper overlap needs two sets of size >= 2, so skip all-singleton families
    live = [u for u in range(n) if any(m & (m - 1) for m in fams[u])]
    for a, u in enumerate(live):
        for v in live[a + 1:]:
            if (reach[u] >> v) & 1 or (reach[v] >> u) & 1:
                continue
            if _laminar_masks(fams[u], fams[v]) is not None:
                return Verdict(False, "tangle", (g.vertices[u], g.vertices[v]))
    return Verdict(True)


def canonicalize(g: Digraph) -> Digraph:
    """Depth-two model with an edge from each non-leaf to each leaf it reaches."""
    leaves = g.leaf_mask
    vs = g.vertices
    edges = []
    for u in range(len(vs)):
        if (leaves >> u) & 1:
            continue
        edges.extend((vs[u], vs[v]) for v in iter_bits(g.reach[u] & leaves))
    return Digraph(vs, edges)


# ---------------------------------------------------------------- placements

def placement_mask(g: Digraph, leaves: Iterable) -> int:
    """Bitmask of a placement, checking every member is a distinct leaf."""
    mask = 0
    for v in leaves:
        i = g.idx(v)
        if not (g.leaf_mask >> i) & 1:
            raise InputError(f"{v!r} is not a leaf")
        if (mask >> i) & 1:
            raise InputError(f"{v!r} placed twice")
        mask |= 1 << i
    return mask


def failure_number(g: Digraph, u, leaves: Iterable) -> int:
    """Number of placed replicas reachable from ``u``."""
    return (g.reach[g.idx(u)] & placement_mask(g, leaves)).bit_count()


def failure_numbers(g: Digraph, pmask: int, within: int | None = None) -> list[int]:
    """Failure number of every vertex (index order) for placement bitmask ``pmask``.

    With ``within`` set, reachability is taken inside the induced subgraph on
    that mask and only its vertices are reported (others get -1).
    """
    if within is None:
        return [(r & pmask).bit_count() for r in g.reach]
    return [
        (_reach_within(g, v, within) & pmask).bit_count() if (within >> v) & 1 else -1
        for v in range(len(g.vertices))
    ]


def _reach_within(g: Digraph, v: int, mask: int) -> int:
    seen = 1 << v
    stack = [v]
    while stack:
        x = stack.pop()
        fresh = g.succ_mask[x] & mask & ~seen
        seen |= fresh
        stack.extend(iter_bits(fresh))
    return seen


def aggregate_from_numbers(numbers: Iterable[int], rho: int) -> tuple[int, ...]:
    agg = [0] * (rho + 1)
    for f in numbers:
        if f < 0:
            continue
        agg[rho - f] += 1
    return tuple(agg)


def failure_aggregate(g: Digraph, leaves: Iterable, rho: int | None = None) -> tuple[int, ...]:
    """Entry ``i`` counts vertices (leaves included) with failure number ``rho - i``."""
    pmask = placement_mask(g, leaves)
    if rho is None:
        rho = pmask.bit_count()
    elif rho < pmask.bit_count():
        raise InputError(f"placement of size {pmask.bit_count()} exceeds rho={rho}")
    return aggregate_from_numbers(failure_numbers(g, pmask), rho)


# ---------------------------------------------------------------- text format

def parse_graph(text: str) -> Digraph:
    """Parse the edge-list format: ``u v`` per edge, lone ``u`` for a vertex, ``#`` comments.

    Vertex order is order of first mention anywhere in the text.
    """
    order: dict = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) > 2 or not all(_TOKEN.match(t) for t in toks):
            raise InputError(f"line {lineno}: cannot parse {raw!r}")
        for tok in toks:
            order.setdefault(tok, None)
        if len(toks) == 2:
            edges.append((toks[0], toks[1]))
    return Digraph(list(order), edges)


def read_graph(path: str | Path) -> Digraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def format_graph(g: Digraph) -> str:
    """Serialize ``g`` so that parsing it back reproduces the vertex order."""
    touched = 0
    implied = []
    for u, v in g.edge_index:
        for w in (u, v):
            if not (touched >> w) & 1:
                touched |= 1 << w
                implied.append(w)
    isolated = [i for i in range(len(g.vertices)) if not (touched >> i) & 1]
    if isolated + implied == list(range(len(g.vertices))):
        lines = [str(g.vertices[i]) for i in isolated]
    else:
        lines = [str(v) for v in g.vertices]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + ("\n" if lines else "")


def write_graph(g: Digraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")
