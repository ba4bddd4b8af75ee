"""Instance generators: random bounded-treewidth and outerplanar systems, and
the two lower-bound families."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .model import (
    Coloring,
    Graph,
    GraphSystem,
    IntersectionSystem,
    SubgraphFamily,
    induced_connected,
)
from .treedecomp import TreeDecomposition

log = logging.getLogger(__name__)


@dataclass
class Generated:
    graph: Graph
    family_h: SubgraphFamily
    coloring: Coloring | None = None
    family_k: SubgraphFamily | None = None
    decomposition: TreeDecomposition | None = None
    warnings: list = field(default_factory=list)

    def graph_system(self) -> GraphSystem:
        return GraphSystem(self.graph, self.family_h, self.coloring)

    def intersection_system(self) -> IntersectionSystem:
        if self.family_k is None:
            raise ValueError("instance has no K family")
        return IntersectionSystem(self.graph, self.family_h, self.family_k)


# --- bounded treewidth --------------------------------------------------------

def random_ktree_bags(t: int, n: int, rng: random.Random) -> tuple[list[frozenset], list[tuple[int, int]]]:
    """Bags of size ``t+1`` glued along random proper overlaps until ``n`` vertices exist."""
    if n < t + 1:
        raise ValueError("need at least t+1 vertices")
    bags = [frozenset(range(t + 1))]
    edges = []
    nxt = t + 1
    while nxt < n:
        p = rng.randrange(len(bags))
        keep = rng.randint(max(1, t + 1 - (n - nxt)), t) if t > 0 else 0
        shared = rng.sample(sorted(bags[p]), keep)
        new = list(range(nxt, min(n, nxt + t + 1 - keep)))
        nxt += len(new)
        bags.append(frozenset(shared) | frozenset(new))
        edges.append((p, len(bags) - 1))
    return bags, edges


def gen_clique_system(
    t: int, n: int, m: int | None = None, seed: int = 0, blue_prob: float = 0.5
) -> Generated:
    """Chordal host of treewidth ``t``; every member is a clique inside one bag."""
    rng = random.Random(seed)
    bags, tedges = random_ktree_bags(t, n, rng)
    gedges = set()
    for b in bags:
        for u, v in combinations(sorted(b), 2):
            gedges.add((u, v))
    g = Graph(n, frozenset(gedges))
    m = n if m is None else m
    members = []
    for _ in range(m):
        b = sorted(bags[rng.randrange(len(bags))])
        size = rng.randint(1, len(b))
        members.append(frozenset(rng.sample(b, size)))
    blue = [v for v in range(n) if rng.random() < blue_prob]
    if not blue:
        blue = [rng.randrange(n)]
    td = TreeDecomposition(tuple(bags), frozenset(tedges), 0)
    return Generated(g, SubgraphFamily.of(members), Coloring.from_blue(n, blue), None, td)


def gen_clique_intersection_system(
    t: int, n: int, m_h: int | None = None, m_k: int | None = None, seed: int = 0
) -> Generated:
    base = gen_clique_system(t, n, m_h, seed)
    rng = random.Random(seed * 7919 + 1)
    bags = base.decomposition.bags
    m_k = n if m_k is None else m_k
    ks = []
    for _ in range(m_k):
        b = sorted(bags[rng.randrange(len(bags))])
        ks.append(frozenset(rng.sample(b, rng.randint(1, len(b)))))
    base.family_k = SubgraphFamily.of(ks, "K")
    return base


def grow_connected(g: Graph, size: int, rng: random.Random, start: int | None = None) -> frozenset:
    start = rng.randrange(g.vertex_count) if start is None else start
    got = {start}
    frontier = set(g.neighbors(start))
    while len(got) < size and frontier:
        v = rng.choice(sorted(frontier))
        got.add(v)
        frontier.discard(v)
        frontier |= {w for w in g.neighbors(v) if w not in got}
    return frozenset(got)


def _compatible(g: Graph, new: frozenset, members: list[frozenset]) -> bool:
    for h in members:
        if new == h:
            continue
        for a, b in ((new, h), (h, new)):
            d = a - b
            if d and not induced_connected(g, d):
                return False
    return True


def sample_nonpiercing(
    g: Graph,
    m: int,
    rng: random.Random,
    max_size: int = 6,
    retries: int = 1000,
    warnings: list | None = None,
) -> list[frozenset]:
    """Rejection-sample ``m`` connected members that are pairwise non-piercing."""
    members: list[frozenset] = []
    for idx in range(m):
        for _ in range(retries):
            cand = grow_connected(g, rng.randint(1, max_size), rng)
            if _compatible(g, cand, members):
                members.append(cand)
                break
        else:
            msg = f"gave up on member {idx} after {retries} attempts"
            log.warning(msg)
            if warnings is not None:
                warnings.append(msg)
    return members


def gen_nonpiercing_system(
    t: int, n: int, m: int, seed: int = 0, max_size: int = 6, blue_prob: float = 0.6
) -> Generated:
    """Non-clique members on a sparse treewidth-``t`` host (a partial k-tree)."""
    rng = random.Random(seed)
    bags, tedges = random_ktree_bags(t, n, rng)
    full = set()
    for b in bags:
        for u, v in combinations(sorted(b), 2):
            full.add((u, v))
    keep = {e for e in sorted(full) if rng.random() < 0.55}
    # reconnect the host with edges of the chordal supergraph
    find, union = _union_find(n, keep)
    for a, b in sorted(full):
        if find(a) != find(b):
            keep.add((a, b))
            union(a, b)
    g = Graph(n, frozenset(keep))
    warnings: list = []
    members = sample_nonpiercing(g, m, rng, max_size, warnings=warnings)
    blue = [v for v in range(n) if rng.random() < blue_prob] or [0]
    td = TreeDecomposition(tuple(bags), frozenset(tedges), 0)
    return Generated(g, SubgraphFamily.of(members), Coloring.from_blue(n, blue), None, td, warnings)


def _union_find(n: int, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for a, b in edges:
        union(a, b)
    return find, union


def gen_nonpiercing_intersection_system(
    t: int, n: int, m_h: int, m_k: int, seed: int = 0, max_size: int = 6
) -> Generated:
    """Like :func:`gen_nonpiercing_system` with a second non-piercing family ``K``."""
    base = gen_nonpiercing_system(t, n, m_h, seed, max_size)
    rng = random.Random(seed * 7919 + 3)
    ks = sample_nonpiercing(base.graph, m_k, rng, max_size, warnings=base.warnings)
    base.family_k = SubgraphFamily.of(ks, "K")
    return base


# --- outerplanar ---------------------------------------------------------------

def random_maximal_outerplanar(n: int, rng: random.Random) -> Graph:
    """Random triangulation of the polygon ``0..n-1``; the outer cycle is the identity."""
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)} if n >= 3 else set()
    if n == 2:
        edges = {(0, 1)}

    def triangulate(poly: list[int]):
        if len(poly) < 4:
            return
        # choose a random diagonal (i, j) with j - i >= 2 and not the closing side
        k = len(poly)
        while True:
            i = rng.randrange(k)
            j = rng.randrange(k)
            i, j = min(i, j), max(i, j)
            if j - i >= 2 and not (i == 0 and j == k - 1):
                break
        a, b = poly[i], poly[j]
        edges.add((min(a, b), max(a, b)))
        triangulate(poly[i : j + 1])
        triangulate(poly[j:] + poly[: i + 1])

    triangulate(list(range(n)))
    return Graph(n, frozenset(edges))


def gen_outerplanar_system(
    n: int,
    m_h: int,
    m_k: int,
    seed: int = 0,
    max_size: int = 5,
    chord_keep: float = 0.7,
) -> Generated:
    rng = random.Random(seed)
    full = random_maximal_outerplanar(n, rng)
    cycle = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)} if n >= 3 else set(full.edges)
    edges = {e for e in full.edges if e in cycle or rng.random() < chord_keep}
    g = Graph(n, frozenset(edges))
    warnings: list = []
    hs = sample_nonpiercing(g, m_h, rng, max_size, warnings=warnings)
    ks = sample_nonpiercing(g, m_k, rng, max_size, warnings=warnings)
    return Generated(
        g, SubgraphFamily.of(hs), None, SubgraphFamily.of(ks, "K"), None, warnings
    )


# --- lower bounds ----------------------------------------------------------------

@dataclass
class LowerBoundInstance:
    system: GraphSystem
    n: int
    N: int
    rows: int
    cols: int
    grid_vertex: dict
    member_key: list
    kind: str

    @property
    def graph(self) -> Graph:
        return self.system.graph


def _lb_parameters(m: int) -> tuple[int, int, list[tuple[int, ...]]]:
    if m < 2:
        raise ValueError("lower-bound constructions need m >= 2")
    n = m // 2
    size = max(1, n // 2)
    subsets = list(combinations(range(n), size))
    assert len(subsets) == comb(n, n // 2)
    return n, len(subsets), subsets


def _host(n: int, rows: int, cols: int) -> tuple[Graph, dict]:
    """Complete bipartite graph between ``R u C`` (ids ``0..2n-1``) and the grid."""
    grid = {}
    for i in range(1, rows + 1):
        for j in range(1, cols + 1):
            grid[(i, j)] = 2 * n + (i - 1) * cols + (j - 1)
    edges = [(r, b) for r in range(2 * n) for b in grid.values()]
    return Graph.from_edges(2 * n + rows * cols, edges), grid


def gen_primal_lb(m: int) -> LowerBoundInstance:
    n, N, subsets = _lb_parameters(m)
    g, grid = _host(n, N, N)
    R = [frozenset(s) for s in subsets]
    C = [frozenset(n + v for v in s) for s in subsets]
    members, keys = [], []
    for i in range(1, N + 1):
        for j in range(1, N):
            members.append(frozenset({grid[(i, j)], grid[(i, j + 1)]}) | R[i - 1] | C[j])
            keys.append(("row", i, j))
    for i in range(1, N):
        for j in range(1, N + 1):
            members.append(frozenset({grid[(i, j)], grid[(i + 1, j)]}) | R[i] | C[j - 1])
            keys.append(("col", i, j))
    coloring = Coloring.from_blue(g.vertex_count, grid.values())
    sys = GraphSystem(g, SubgraphFamily.of(members), coloring)
    return LowerBoundInstance(sys, n, N, N, N, grid, keys, "primal")


def gen_dual_lb(m: int) -> LowerBoundInstance:
    """Members are 2x2 grid blocks arranged diagonally so that adjacent blocks
    share exactly one corner; block ``(a, b)`` also holds ``R_a`` and ``C_b``."""
    n, N, subsets = _lb_parameters(m)
    size = 2 * N + 1
    g, grid = _host(n, size, size)
    R = [frozenset(s) for s in subsets]
    C = [frozenset(n + v for v in s) for s in subsets]
    members, keys = [], []
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            r, c = a + b - 1, a - b + N
            block = {grid[(r, c)], grid[(r + 1, c)], grid[(r, c + 1)], grid[(r + 1, c + 1)]}
            members.append(frozenset(block) | R[a - 1] | C[b - 1])
            keys.append((a, b))
    sys = GraphSystem(g, SubgraphFamily.of(members))
    return LowerBoundInstance(sys, n, N, size, size, grid, keys, "dual")
