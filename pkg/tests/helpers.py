from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from npsupport.model import Graph


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


@st.composite
def small_graphs(draw, max_n: int = 7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


def brute_treewidth(g: Graph) -> int:
    """Minimum over all elimination orders of the largest eliminated degree."""
    n = g.vertex_count
    if n == 0:
        return -1
    best = n - 1
    for order in itertools.permutations(range(n)):
        adj = {v: set(g.adjacency[v]) for v in range(n)}
        w = 0
        for v in order:
            nb = adj.pop(v)
            w = max(w, len(nb))
            if w >= best:
                break
            for a in nb:
                adj[a].discard(v)
                adj[a] |= nb - {a}
        best = min(best, w)
    return best


def brute_connected(edges: set, labels) -> bool:
    labels = set(labels)
    if len(labels) <= 1:
        return True
    start = next(iter(labels))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for a, b in edges:
            for p, q in ((a, b), (b, a)):
                if p == x and q in labels and q not in seen:
                    seen.add(q)
                    stack.append(q)
    return seen == labels
