"""Decomposition of untangled multitrees into a full binary tree of subproblems.

A subproblem is a vertex set of the input multitree together with its local
roots (the in-degree-0 vertices of the induced subgraph) in a fixed order.
The order is inherited from the parent subproblem so that ancestry
signatures of parent and child line up through small alignment maps.

Admissible subproblems are split by the first applicable rule among

* UP      a local root has one child and it is not a connector,
* OUT     a child of a local root has no connector below it,
* INCLUDE roots Q whose only child is a shared connector ``c`` whose
          parents all lie in Q,
* MERGE   the children of the roots are partitioned along the connected
          components of the connector-shadow hypergraph.

A subproblem whose induced subgraph is disconnected is first split into
components (SPLIT). This happens after MERGE leaves a root without children
on one side, and for disconnected inputs.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable

from networkx.utils import UnionFind

from .errors import InvariantViolation, ValidationError
from .graph import Digraph, Verdict, is_multitree, is_untangled, iter_bits


class Kind(str, enum.Enum):
    INTERNAL = "internal"
    TRIVIAL = "trivial"
    BASE_TREE = "base-tree"
    BASE_DISCRETE = "base-discrete"


class Case(str, enum.Enum):
    UP = "UP"
    OUT = "OUT"
    INCLUDE = "INCLUDE"
    MERGE = "MERGE"
    SPLIT = "SPLIT"


@dataclass(frozen=True)
class Subproblem:
    mask: int
    roots: tuple[int, ...]
    kind: Kind

    def vertices(self, g: Digraph) -> list:
        return g.ids(self.mask)

    def local_roots(self, g: Digraph) -> list:
        return [g.vertices[r] for r in self.roots]

    def __len__(self) -> int:
        return self.mask.bit_count()


@dataclass(frozen=True)
class CaseTag:
    """Which rule splits a subproblem and where.

    ``root`` is a position in the subproblem's root order; ``child`` a vertex
    index; ``group`` the root positions forming Q for INCLUDE.
    """

    case: Case
    root: int | None = None
    child: int | None = None
    group: tuple[int, ...] = ()


@dataclass(frozen=True)
class Split:
    """Two child subproblems and, for each, the position every parent root maps to."""

    left: Subproblem
    right: Subproblem
    align_left: tuple[int | None, ...]
    align_right: tuple[int | None, ...]


# ---------------------------------------------------------------- subproblems

def local_root_mask(g: Digraph, mask: int) -> int:
    out = 0
    for v in iter_bits(mask):
        if not g.pred_mask[v] & mask:
            out |= 1 << v
    return out


def subproblem_kind(g: Digraph, mask: int, roots: tuple[int, ...]) -> Kind:
    if not mask & g.leaf_mask:
        return Kind.TRIVIAL
    if len(roots) == 1:
        return Kind.BASE_TREE
    if len(roots) == mask.bit_count():
        return Kind.BASE_DISCRETE
    return Kind.INTERNAL


def make_subproblem(g: Digraph, vertices: Iterable | int, roots: Iterable | None = None) -> Subproblem:
    """Build a subproblem from vertex ids (or a bitmask).

    ``roots`` fixes the local-root order; it defaults to vertex order and must
    match the in-degree-0 vertices of the induced subgraph.
    """
    mask = vertices if isinstance(vertices, int) else g.mask_of(vertices)
    if roots is None:
        order = tuple(iter_bits(local_root_mask(g, mask)))
    else:
        order = tuple(g.idx(r) for r in roots)
    return _sub(g, mask, order)


def _sub(g: Digraph, mask: int, roots: tuple[int, ...]) -> Subproblem:
    expect = local_root_mask(g, mask)
    got = sum(1 << r for r in roots)
    if got != expect or len(set(roots)) != len(roots):
        raise InvariantViolation(
            f"local roots {g.ids(got)} disagree with induced roots {g.ids(expect)}"
        )
    return Subproblem(mask, roots, subproblem_kind(g, mask, roots))


def full_subproblem(g: Digraph) -> Subproblem:
    return _sub(g, g.all_mask, tuple(iter_bits(g.root_mask)))


def _children(g: Digraph, v: int, mask: int) -> list[int]:
    return [w for w in g.succ[v] if (mask >> w) & 1]


def _shadow(g: Digraph, v: int, mask: int) -> int:
    return g.reach[v] & mask & g.connector_mask


def verify_admissible(g: Digraph, s: Subproblem | Iterable) -> Verdict:
    """Connector complete and child-descendant complete.

    Connector completeness is required of the connectors inside the
    subproblem: one parent inside forces all parents inside. A connector
    whose parents all lie outside is a local root and passes.
    """
    mask = s.mask if isinstance(s, Subproblem) else g.mask_of(s)
    vs = g.vertices
    for c in iter_bits(mask & g.connector_mask):
        missing = g.pred_mask[c] & ~mask
        if missing and missing != g.pred_mask[c]:
            return Verdict(False, "connector", (vs[c], vs[(missing & -missing).bit_length() - 1]))
    for r in iter_bits(local_root_mask(g, mask)):
        for c in _children(g, r, mask):
            missing = g.reach[c] & ~mask
            if missing:
                return Verdict(False, "child-descendant",
                               (vs[c], vs[(missing & -missing).bit_length() - 1]))
    return Verdict(True)


def components(g: Digraph, mask: int) -> list[int]:
    """Weakly connected components of the induced subgraph, as bitmasks."""
    out = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= (g.succ_mask[v] | g.pred_mask[v]) & mask
            frontier = nxt & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out


# ---------------------------------------------------------------- hypergraph

@dataclass(frozen=True)
class Hyperedge:
    vertices: int  # bitmask of connectors
    root: int      # root position in the subproblem
    child: int     # vertex index of the root's child


@dataclass(frozen=True)
class ShadowHypergraph:
    vertices: int
    edges: tuple[Hyperedge, ...]

    def edge_sets(self, g: Digraph) -> list[frozenset]:
        return [frozenset(g.ids(e.vertices)) for e in self.edges]


@dataclass(frozen=True)
class Component:
    vertices: int
    edges: tuple[Hyperedge, ...]


def build_hypergraph(g: Digraph, s: Subproblem) -> ShadowHypergraph:
    """Non-root connectors of the subproblem, one hyperedge per (local root, child) pair.

    Children whose shadow is empty contribute no hyperedge.
    """
    edges = []
    for pos, r in enumerate(s.roots):
        for c in _children(g, r, s.mask):
            sh = _shadow(g, c, s.mask)
            if sh:
                edges.append(Hyperedge(sh, pos, c))
    rmask = sum(1 << r for r in s.roots)
    return ShadowHypergraph(s.mask & g.connector_mask & ~rmask, tuple(edges))


def hypergraph_components(h: ShadowHypergraph, g: Digraph | None = None) -> list[Component]:
    """Maximal components under vertex sharing, in order of smallest member.

    Each component must be covered by one of its own hyperedges and the
    per-root hyperedge families inside a component must be pairwise laminar.
    Violations mean the input was not an untangled multitree. Pass ``g`` to
    get vertex ids rather than indexes in error messages.
    """
    uf = UnionFind()
    for v in iter_bits(h.vertices):
        uf[v]
    for e in h.edges:
        members = list(iter_bits(e.vertices))
        uf.union(*members)
    groups: dict[int, list[Hyperedge]] = {}
    masks: dict[int, int] = {}
    for v in iter_bits(h.vertices):
        rep = uf[v]
        masks[rep] = masks.get(rep, 0) | (1 << v)
    for e in h.edges:
        rep = uf[(e.vertices & -e.vertices).bit_length() - 1]
        groups.setdefault(rep, []).append(e)
    comps = sorted(
        (Component(masks[rep], tuple(groups.get(rep, ()))) for rep in masks),
        key=lambda c: c.vertices & -c.vertices,
    )
    name = (lambda m: g.ids(m)) if g is not None else (lambda m: list(iter_bits(m)))
    seen = 0
    for comp in comps:
        if comp.vertices & seen:
            raise InvariantViolation(f"components overlap at {name(comp.vertices & seen)}")
        seen |= comp.vertices
        if comp.edges and not any(e.vertices == comp.vertices for e in comp.edges):
            raise InvariantViolation(
                f"component {name(comp.vertices)} is not covered by a single hyperedge; "
                "input is not an untangled multitree"
            )
        by_root: dict[int, list[int]] = {}
        for e in comp.edges:
            by_root.setdefault(e.root, []).append(e.vertices)
        fams = list(by_root.values())
        for i, f1 in enumerate(fams):
            for f2 in fams[i + 1:]:
                for a in f1:
                    for b in f2:
                        common = a & b
                        if common and common != a and common != b:
                            raise InvariantViolation(
                                f"hyperedges {name(a)} and {name(b)} overlap properly; "
                                "input is not an untangled multitree"
                            )
    return comps


# ---------------------------------------------------------------- cases

def classify(g: Digraph, s: Subproblem) -> CaseTag:
    """First applicable rule of UP, OUT, INCLUDE, MERGE; sites by smallest root position."""
    mask = s.mask
    kids = [_children(g, r, mask) for r in s.roots]
    for pos, cs in enumerate(kids):
        if len(cs) == 1 and not (g.connector_mask >> cs[0]) & 1:
            return CaseTag(Case.UP, root=pos, child=cs[0])
    for pos, cs in enumerate(kids):
        for c in cs:
            if not _shadow(g, c, mask):
                return CaseTag(Case.OUT, root=pos, child=c)
    position = {r: p for p, r in enumerate(s.roots)}
    for pos, cs in enumerate(kids):
        if len(cs) != 1:
            continue
        c = cs[0]
        parents = g.pred[c]
        if len(parents) < 2 or any(p not in position for p in parents):
            continue
        if all(kids[position[p]] == [c] for p in parents):
            group = tuple(sorted(position[p] for p in parents))
            return CaseTag(Case.INCLUDE, root=group[0], child=c, group=group)
    if all(kids) and any(len(cs) >= 2 for cs in kids):
        comps = hypergraph_components(build_hypergraph(g, s), g)
        if len(comps) >= 2:
            return CaseTag(Case.MERGE)
    raise InvariantViolation(
        f"no decomposition rule applies to subproblem {s.vertices(g)}; "
        "input is not an untangled multitree"
    )


def apply_up(g: Digraph, s: Subproblem, i: int) -> Split:
    r = s.roots[i]
    (c,) = _children(g, r, s.mask)
    roots = s.roots[:i] + (c,) + s.roots[i + 1:]
    left = _sub(g, s.mask & ~(1 << r), roots)
    right = _sub(g, 1 << r, (r,))
    ident = tuple(range(len(s.roots)))
    return Split(left, right, ident, tuple(0 if j == i else None for j in ident))


def apply_out(g: Digraph, s: Subproblem, i: int, c: int) -> Split:
    below = g.reach[c] & s.mask
    if below & g.connector_mask:
        raise InvariantViolation("OUT branch contains a connector")
    left = _sub(g, s.mask & ~below, s.roots)
    right = _sub(g, below, (c,))
    ident = tuple(range(len(s.roots)))
    return Split(left, right, ident, tuple(0 if j == i else None for j in ident))


def apply_include(g: Digraph, s: Subproblem, group: Iterable[int], c: int) -> Split:
    group = tuple(sorted(group))
    if len(group) < 2:
        raise InvariantViolation("INCLUDE needs at least two roots")
    qmask = sum(1 << s.roots[j] for j in group)
    roots: list[int] = []
    align: list[int] = []
    for j, r in enumerate(s.roots):
        if j in group:
            if j == group[0]:
                roots.append(c)
            align.append(-1)
        else:
            align.append(len(roots))
            roots.append(r)
    ell = roots.index(c)
    align_left = tuple(ell if a == -1 else a for a in align)
    left = _sub(g, s.mask & ~qmask, tuple(roots))
    right = _sub(g, qmask, tuple(s.roots[j] for j in group))
    align_right = tuple(group.index(j) if j in group else None for j in range(len(s.roots)))
    return Split(left, right, align_left, align_right)


def apply_merge(g: Digraph, s: Subproblem) -> Split:
    """Partition root children by hypergraph component.

    The first side takes the component holding the connector with the
    smallest id, the second side everything else; both keep all roots.
    """
    h = build_hypergraph(g, s)
    comps = hypergraph_components(h, g)
    if len(comps) < 2:
        raise InvariantViolation("MERGE needs at least two hypergraph components")
    vs = g.vertices
    first = min(comps, key=lambda comp: min(str(vs[v]) for v in iter_bits(comp.vertices)))
    rmask = sum(1 << r for r in s.roots)
    one = two = rmask
    for pos, r in enumerate(s.roots):
        for c in _children(g, r, s.mask):
            below = g.reach[c] & s.mask
            if _shadow(g, c, s.mask) & first.vertices:
                one |= below
            else:
                two |= below
    if one & two != rmask:
        raise InvariantViolation("MERGE sides share non-root vertices")
    if one == s.mask or two == s.mask:
        raise InvariantViolation("MERGE did not shrink the subproblem")
    ident = tuple(range(len(s.roots)))
    return Split(_sub(g, one, s.roots), _sub(g, two, s.roots), ident, ident)


def apply_split(g: Digraph, s: Subproblem) -> Split:
    """Separate the component containing the first root from the rest."""
    comps = components(g, s.mask)
    if len(comps) < 2:
        raise InvariantViolation("SPLIT on a connected subproblem")
    first = next(cm for cm in comps if (cm >> s.roots[0]) & 1)
    rest = s.mask & ~first
    lroots = tuple(r for r in s.roots if (first >> r) & 1)
    rroots = tuple(r for r in s.roots if (rest >> r) & 1)
    align_left = tuple(lroots.index(r) if (first >> r) & 1 else None for r in s.roots)
    align_right = tuple(rroots.index(r) if (rest >> r) & 1 else None for r in s.roots)
    return Split(_sub(g, first, lroots), _sub(g, rest, rroots), align_left, align_right)


# ---------------------------------------------------------------- tree

@dataclass
class DecompNode:
    id: int
    sub: Subproblem
    tag: CaseTag | None = None
    children: tuple[DecompNode, ...] = ()
    align: tuple[tuple[int | None, ...], ...] = ()

    @property
    def kind(self) -> Kind:
        return self.sub.kind

    @property
    def case(self) -> Case | None:
        return self.tag.case if self.tag else None

    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class DecompTree:
    graph: Digraph
    root: DecompNode
    nodes: list[DecompNode] = field(default_factory=list)

    def leaves(self) -> list[DecompNode]:
        return [n for n in self.nodes if n.is_leaf()]

    def case_counts(self) -> dict[str, int]:
        out = {c.value: 0 for c in Case}
        for n in self.nodes:
            if n.tag:
                out[n.tag.case.value] += 1
        return out

    def postorder(self) -> list[DecompNode]:
        out = []
        stack = [(self.root, False)]
        while stack:
            node, done = stack.pop()
            if done or node.is_leaf():
                out.append(node)
                continue
            stack.append((node, True))
            for ch in reversed(node.children):
                stack.append((ch, False))
        return out

    def to_dict(self) -> dict:
        g = self.graph
        vs = g.vertices
        nodes = []
        for n in self.nodes:
            entry = {
                "id": n.id,
                "kind": n.kind.value,
                "case": n.case.value if n.case else None,
                "vertices": [str(v) for v in n.sub.vertices(g)],
                "local_roots": [str(v) for v in n.sub.local_roots(g)],
                "children": [ch.id for ch in n.children],
                "alignment": [list(a) for a in n.align],
            }
            if n.tag is not None:
                entry["site"] = {
                    "root": n.tag.root,
                    "child": None if n.tag.child is None else str(vs[n.tag.child]),
                    "group": list(n.tag.group),
                }
            nodes.append(entry)
        return {"root": self.root.id, "nodes": nodes}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def split_node(g: Digraph, s: Subproblem) -> tuple[CaseTag, Split]:
    """Pick and apply the rule for one internal subproblem."""
    if len(components(g, s.mask)) > 1:
        return CaseTag(Case.SPLIT), apply_split(g, s)
    tag = classify(g, s)
    if tag.case is Case.UP:
        return tag, apply_up(g, s, tag.root)
    if tag.case is Case.OUT:
        return tag, apply_out(g, s, tag.root, tag.child)
    if tag.case is Case.INCLUDE:
        return tag, apply_include(g, s, tag.group, tag.child)
    return tag, apply_merge(g, s)


def check_input(g: Digraph) -> None:
    verdict = is_multitree(g)
    if not verdict:
        raise ValidationError("multitree", verdict.witness, f"not a multitree ({verdict.kind}): {verdict.witness}")
    verdict = is_untangled(g)
    if not verdict:
        raise ValidationError("untangled", verdict.witness, f"multitree is tangled at {verdict.witness}")


def decompose(g: Digraph, rho: int | None = None, *, validate: bool = True) -> DecompTree:
    """Build the decomposition tree of an untangled multitree.

    Every internal subproblem is checked for admissibility as it is split.
    ``rho`` is accepted for interface symmetry with the solver and unused.
    """
    if validate:
        check_input(g)
    root = DecompNode(0, full_subproblem(g))
    nodes = [root]
    stack = [root]
    n = len(g)
    limit = max(4, 2 * n * max(1, g.root_mask.bit_count()) + 1)
    while stack:
        node = stack.pop()
        if node.sub.kind is not Kind.INTERNAL:
            continue
        verdict = verify_admissible(g, node.sub)
        if not verdict:
            raise InvariantViolation(f"inadmissible subproblem ({verdict.kind}: {verdict.witness})")
        tag, split = split_node(g, node.sub)
        for part in (split.left, split.right):
            if not part.mask or part.mask & ~node.sub.mask or part.mask == node.sub.mask:
                raise InvariantViolation("split did not produce a strictly smaller subproblem")
        left = DecompNode(len(nodes), split.left)
        right = DecompNode(len(nodes) + 1, split.right)
        nodes.extend((left, right))
        node.tag = tag
        node.children = (left, right)
        node.align = (split.align_left, split.align_right)
        stack.extend((right, left))
        if len(nodes) > limit:
            raise InvariantViolation(f"decomposition exceeded {limit} nodes")
    return DecompTree(g, root, nodes)
