"""Independent checkers: support oracles, outerplanarity and exact treewidth.

Nothing here reuses the construction code; the treewidth solver in particular
is a different algorithm from the subset DP used to build decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Sequence

import networkx as nx

from .model import Graph, GraphSystem, IntersectionSystem, Support, SupportError


@dataclass(frozen=True)
class OracleReport:
    ok: bool
    witness: object = None
    detail: str = ""
    components: tuple = ()

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "hyperedge": self.witness, "detail": self.detail,
                "components": [list(c) for c in self.components]}


def _label_components(support: Support, labels: Iterable) -> list[list]:
    """Components of the support induced on ``labels`` (missing labels are singletons)."""
    labels = set(labels)
    pos = {lab: i for i, lab in enumerate(support.labels)}
    want = {pos[lab] for lab in labels if lab in pos}
    adj: dict[int, list[int]] = {i: [] for i in want}
    for i, j in support.edges:
        if i in want and j in want:
            adj[i].append(j)
            adj[j].append(i)
    comps = []
    seen: set = set()
    for s in sorted(want):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(support.labels[i] for i in comp))
    comps.extend([lab] for lab in sorted(labels - set(pos), key=repr))
    return comps


def _label_connected(support: Support, labels: Iterable) -> bool:
    return len(_label_components(support, labels)) <= 1


def _check_hyperedges(support: Support, expected: set, hyperedges, what: str) -> OracleReport:
    if set(support.labels) != expected:
        raise ValueError(f"support labels differ from the {what}")
    for key, labels in hyperedges:
        comps = _label_components(support, labels)
        if len(comps) > 1:
            return OracleReport(False, key, f"hyperedge {key} is disconnected", tuple(map(tuple, comps)))
    return OracleReport(True)


def primal_hyperedges(members: Sequence[frozenset], blue: frozenset):
    return [(i, h & blue) for i, h in enumerate(members)]


def dual_hyperedges(members: Sequence[frozenset], vertices: Iterable[int]):
    index: dict[int, list[int]] = {}
    for i, h in enumerate(members):
        for v in h:
            index.setdefault(v, []).append(i)
    return [(v, index.get(v, [])) for v in vertices]


def intersection_hyperedges(members: Sequence[frozenset], ks: Sequence[frozenset]):
    return [(j, [i for i, h in enumerate(members) if h & k]) for j, k in enumerate(ks)]


def primal_oracle(system: GraphSystem, support: Support) -> OracleReport:
    """Every member's blue part must induce a connected subgraph of the support."""
    blue = system.coloring.blue()
    return _check_hyperedges(
        support, set(blue), primal_hyperedges(system.family_h.members, blue), "blue vertex set"
    )


def dual_oracle(system: GraphSystem, support: Support) -> OracleReport:
    """For every vertex ``v`` the members containing ``v`` induce a connected subgraph."""
    members = system.family_h.members
    return _check_hyperedges(
        support, set(range(len(members))), dual_hyperedges(members, system.graph.vertices), "member indices"
    )


def intersection_oracle(system: IntersectionSystem, support: Support) -> OracleReport:
    """For every ``K`` the members of ``H`` meeting ``K`` induce a connected subgraph."""
    members = system.family_h.members
    return _check_hyperedges(
        support,
        set(range(len(members))),
        intersection_hyperedges(members, system.family_k.members),
        "member indices",
    )


_BASE_KIND = {
    "primal": "primal",
    "dual": "dual",
    "intersection": "intersection",
    "outerplanar-primal": "primal",
    "outerplanar-dual": "dual",
    "outerplanar-intersection": "intersection",
}


def check_support(kind: str, system, support: Support, blue: Iterable[int] | None = None) -> OracleReport:
    """Run the oracle matching ``kind`` against a graph, intersection or cycle system.

    Cycle systems carry no colouring; ``blue`` defaults to every cycle vertex.
    Raises ``ValueError`` when the support labels do not match the system.
    """
    try:
        base = _BASE_KIND[kind]
    except KeyError:
        raise ValueError(f"unknown support kind {kind!r}") from None
    if hasattr(system, "graph"):
        members = system.family_h.members
        vertices = list(system.graph.vertices)
        if blue is None:
            coloring = getattr(system, "coloring", None)
            blue = coloring.blue() if coloring is not None else frozenset(vertices)
        ks = getattr(system, "family_k", None)
    else:
        members = system.family_h.members
        vertices = list(range(system.n))
        blue = frozenset(vertices) if blue is None else blue
        ks = system.k_or_singletons() if base == "intersection" else None
    blue = frozenset(blue)
    if base == "primal":
        return _check_hyperedges(support, set(blue), primal_hyperedges(members, blue), "blue vertex set")
    if base == "dual":
        return _check_hyperedges(
            support, set(range(len(members))), dual_hyperedges(members, vertices), "member indices"
        )
    if ks is None:
        raise ValueError("intersection check needs a K family")
    return _check_hyperedges(
        support, set(range(len(members))), intersection_hyperedges(members, ks.members), "member indices"
    )


# --- outerplanarity ---------------------------------------------------------

def is_outerplanar(g: Graph) -> bool:
    """Planarity of ``g`` plus one apex vertex adjacent to everything."""
    n = g.vertex_count
    if n <= 3:
        return True
    if len(g.edges) > 2 * n - 3:
        return False
    h = nx.Graph()
    h.add_nodes_from(range(n + 1))
    h.add_edges_from(g.edges)
    h.add_edges_from((n, v) for v in range(n))
    planar, _ = nx.check_planarity(h)
    return planar


def noncrossing_order(order: Sequence, edges: Iterable[tuple]) -> bool:
    """True iff placing ``order`` on a circle draws ``edges`` as non-crossing chords."""
    pos = {lab: i for i, lab in enumerate(order)}
    if len(pos) != len(order):
        return False
    chords = []
    for a, b in edges:
        if a not in pos or b not in pos:
            return False
        i, j = sorted((pos[a], pos[b]))
        chords.append((i, j))
    chords.sort()
    for x, (a, b) in enumerate(chords):
        for c, d in chords[x + 1 :]:
            if c >= b:
                break
            if a < c < b < d:
                return False
    return True


def _has_minor(n: int, edges: frozenset, pattern_n: int, pattern_edges: list) -> bool:
    memo: set = set()

    def contains_pattern(k: int, es: frozenset) -> bool:
        for perm in permutations(range(k), pattern_n):
            if all((min(perm[a], perm[b]), max(perm[a], perm[b])) in es for a, b in pattern_edges):
                return True
        return False

    def relabel(vs: list[int], es) -> tuple[int, frozenset]:
        idx = {v: i for i, v in enumerate(vs)}
        return len(vs), frozenset((min(idx[a], idx[b]), max(idx[a], idx[b])) for a, b in es)

    def rec(k: int, es: frozenset) -> bool:
        if len(es) < len(pattern_edges) or k < pattern_n:
            return False
        key = (k, es)
        if key in memo:
            return False
        if k == pattern_n:
            if contains_pattern(k, es):
                return True
            memo.add(key)
            return False
        deg = [0] * k
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        # isolated vertices can always be dropped first
        iso = [v for v in range(k) if deg[v] == 0]
        if iso:
            rest = [v for v in range(k) if deg[v] > 0]
            if len(rest) >= pattern_n:
                nk, nes = relabel(rest, es)
                if rec(nk, nes):
                    return True
                memo.add(key)
                return False
        for v in range(k):
            vs = [u for u in range(k) if u != v]
            nk, nes = relabel(vs, [e for e in es if v not in e])
            if rec(nk, nes):
                return True
        for a, b in sorted(es):
            vs = [u for u in range(k) if u != b]
            merged = set()
            for x, y in es:
                x = a if x == b else x
                y = a if y == b else y
                if x != y:
                    merged.add((min(x, y), max(x, y)))
            nk, nes = relabel(vs, merged)
            if rec(nk, nes):
                return True
        memo.add(key)
        return False

    return rec(n, edges)


K4_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
K23_EDGES = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]


def is_outerplanar_by_minors(g: Graph) -> bool:
    """Brute-force forbidden-minor test; exponential, meant for tiny graphs."""
    n = g.vertex_count
    if n > 9:
        raise ValueError("minor search is only intended for graphs with at most 9 vertices")
    return not (_has_minor(n, g.edges, 4, K4_EDGES) or _has_minor(n, g.edges, 5, K23_EDGES))


def outerplanar_embedding_order(g: Graph) -> list[int] | None:
    """A cyclic vertex order with all edges as non-crossing chords, or None."""
    n = g.vertex_count
    if n <= 3:
        return list(range(n))
    if not is_outerplanar(g):
        return None
    h = nx.Graph()
    h.add_nodes_from(range(n + 1))
    h.add_edges_from(g.edges)
    h.add_edges_from((n, v) for v in range(n))
    _, emb = nx.check_planarity(h)
    return [v for v in emb.neighbors_cw_order(n)]


# --- treewidth ---------------------------------------------------------------

def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.vertex_count
    out = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(comp)
    return out


def _degeneracy_lower_bound(adj: list[set]) -> int:
    adj = [set(a) for a in adj]
    alive = set(range(len(adj)))
    best = 0
    while alive:
        v = min(alive, key=lambda u: len(adj[u]))
        best = max(best, len(adj[v]))
        for w in adj[v]:
            adj[w].discard(v)
        alive.discard(v)
    return best


def _feasible(masks: list[int], n: int, k: int) -> bool:
    """Is there an elimination ordering of width at most ``k``?"""
    full = (1 << n) - 1
    failed: set[int] = set()

    def qset(elim: int, v: int) -> int:
        seen = masks[v] | (1 << v)
        frontier = masks[v] & elim
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            u = low.bit_length() - 1
            new = masks[u] & ~seen
            seen |= new
            frontier |= new & elim
        return seen & ~elim & ~(1 << v)

    def search(elim: int) -> bool:
        remaining = full & ~elim
        if bin(remaining).count("1") <= k + 1:
            return True
        if elim in failed:
            return False
        cands = []
        r = remaining
        while r:
            low = r & -r
            r ^= low
            v = low.bit_length() - 1
            q = bin(qset(elim, v)).count("1")
            if q <= k:
                cands.append((q, v))
        cands.sort()
        for _, v in cands:
            if search(elim | (1 << v)):
                return True
        failed.add(elim)
        return False

    return search(0)


def _component_masks(g: Graph, comp: list[int]) -> list[int]:
    idx = {v: i for i, v in enumerate(comp)}
    masks = []
    for v in comp:
        m = 0
        for w in g.adjacency[v]:
            m |= 1 << idx[w]
        masks.append(m)
    return masks


def treewidth_at_most(g: Graph, k: int) -> bool:
    """Exact decision procedure; no size cap, exponential in the worst case."""
    for comp in _components(g):
        if not _feasible(_component_masks(g, comp), len(comp), k):
            return False
    return True


def exact_treewidth(g: Graph, limit: int = 20) -> int:
    if g.vertex_count > limit:
        raise ValueError(f"exact_treewidth is limited to {limit} vertices (got {g.vertex_count})")
    if g.vertex_count == 0:
        return -1
    best = 0
    for comp in _components(g):
        masks = _component_masks(g, comp)
        n = len(comp)
        sub_adj = [set() for _ in range(n)]
        for i, m in enumerate(masks):
            for j in range(n):
                if m >> j & 1:
                    sub_adj[i].add(j)
        k = max(best, _degeneracy_lower_bound(sub_adj))
        while not _feasible(masks, n, k):
            k += 1
        best = max(best, k)
    return best


# --- lower-bound structure ----------------------------------------------------

def forced_edges(kind: str, inst) -> set[tuple]:
    """Edges every support must contain.

    Primal: each member has exactly two blue vertices, which must be adjacent.
    Dual: a vertex in exactly two members forces those two members together.
    The result is checked to be exactly the ``N x N`` grid.
    """
    if kind != inst.kind:
        raise ValueError(f"instance is a {inst.kind} lower bound, not {kind}")
    fam = inst.system.family_h
    N = inst.N
    if inst.kind == "primal":
        blue = inst.system.coloring.blue()
        out = set()
        for h in fam:
            bh = sorted(h & blue)
            if len(bh) != 2:
                raise SupportError("primal lower-bound member without exactly two blue vertices")
            out.add(tuple(bh))
        expected = set()
        for i in range(1, N + 1):
            for j in range(1, N + 1):
                if j < N:
                    expected.add(tuple(sorted((inst.grid_vertex[(i, j)], inst.grid_vertex[(i, j + 1)]))))
                if i < N:
                    expected.add(tuple(sorted((inst.grid_vertex[(i, j)], inst.grid_vertex[(i + 1, j)]))))
    else:
        index = fam.vertex_index()
        out = set()
        for v, owners in index.items():
            if len(owners) == 2:
                out.add(tuple(owners))
        pos = {key: i for i, key in enumerate(inst.member_key)}
        expected = set()
        for a in range(1, N + 1):
            for b in range(1, N + 1):
                if a < N:
                    expected.add(tuple(sorted((pos[(a, b)], pos[(a + 1, b)]))))
                if b < N:
                    expected.add(tuple(sorted((pos[(a, b)], pos[(a, b + 1)]))))
        shared_corners = _dual_shared_corners(inst)
        for v in shared_corners:
            if len(index[v]) != 2:
                raise SupportError(f"corner vertex {v} lies in {len(index[v])} members")
    if out != expected:
        raise SupportError("forced edges do not form the expected grid")
    return out


def _dual_shared_corners(inst) -> list[int]:
    N = inst.N
    corners = []
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            r, c = a + b - 1, a - b + N
            if a < N:
                corners.append(inst.grid_vertex[(r + 1, c + 1)])
            if b < N:
                corners.append(inst.grid_vertex[(r + 1, c)])
    return corners


def grid_labels_graph(edges: set[tuple]) -> Graph:
    """Relabel an edge set onto ``0..k-1`` (sorted labels)."""
    labels = sorted({v for e in edges for v in e})
    pos = {v: i for i, v in enumerate(labels)}
    return Graph.from_edges(len(labels), [(pos[a], pos[b]) for a, b in edges])
