"""Random untangled k-multitrees for tests and benchmarks."""

from __future__ import annotations

import hashlib
import random

from .errors import InputError
from .graph import Digraph, format_graph, is_multitree, is_untangled


def random_forest(k: int, n: int, rng: random.Random) -> tuple[list[str], list[tuple[str, str]]]:
    """``k`` disjoint random trees with ``n`` vertices in total."""
    if k < 1 or n < k:
        raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
    sizes = [1] * k
    for _ in range(n - k):
        sizes[rng.randrange(k)] += 1
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for t, size in enumerate(sizes):
        names = [f"t{t}_{i}" for i in range(size)]
        vertices.extend(names)
        for i in range(1, size):
            edges.append((names[rng.randrange(i)], names[i]))
    return vertices, edges


def random_multitree(k: int, n: int, seed: int, merges: int | None = None) -> Digraph:
    """An untangled ``k``-multitree on ``n`` vertices, reproducible from ``seed``.

    Starts from a random forest and adds edges into existing non-root
    vertices, turning them into shared connectors. Any edge that breaks the
    multitree or untangled property is dropped again.
    """
    rng = random.Random(seed)
    vertices, edges = random_forest(k, n, rng)
    g = Digraph(vertices, edges)
    if k == 1:
        return g
    attempts = n if merges is None else merges
    for _ in range(attempts):
        u = rng.randrange(n)
        w = rng.randrange(n)
        if u == w or not g.pred[w] or w in g.succ[u]:
            continue
        trial = Digraph(vertices, edges + [(vertices[u], vertices[w])])
        if trial.root_mask.bit_count() != k:
            continue
        if is_multitree(trial) and is_untangled(trial):
            edges.append((vertices[u], vertices[w]))
            g = trial
    return g


def instance_hash(g: Digraph) -> str:
    return hashlib.sha256(format_graph(g).encode()).hexdigest()[:16]
