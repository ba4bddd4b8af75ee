"""Tree decompositions: construction, validation, rooting and binarisation."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from . import kernels
from .model import Graph, PreconditionError, SupportError


class InvalidDecompositionError(PreconditionError):
    pass


class TooLargeError(SupportError):
    pass


class DecompositionMode(Enum):
    EXACT_SMALL = "exact"
    MIN_FILL = "min-fill"
    PROVIDED = "provided"


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violated: str | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by node id ``0..k-1`` plus an undirected tree on the nodes."""

    bags: tuple
    tree_edges: frozenset
    root: int | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(
            self, "tree_edges", frozenset((min(a, b), max(a, b)) for a, b in self.tree_edges)
        )

    @property
    def node_count(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1

    def tree_adjacency(self) -> list[list[int]]:
        if "tadj" not in self._cache:
            adj = [[] for _ in self.bags]
            for a, b in sorted(self.tree_edges):
                adj[a].append(b)
                adj[b].append(a)
            self._cache["tadj"] = adj
        return self._cache["tadj"]

    def rooted(self, root: int | None = None) -> "TreeDecomposition":
        r = self.root if root is None else root
        if r is None:
            r = 0
        return TreeDecomposition(self.bags, self.tree_edges, r)

    # rooted helpers -------------------------------------------------------
    def _rooted_data(self):
        if "rooted" in self._cache:
            return self._cache["rooted"]
        if self.root is None:
            raise InvalidDecompositionError("decomposition is not rooted")
        adj = self.tree_adjacency()
        k = self.node_count
        parent = [-1] * k
        children: list[list[int]] = [[] for _ in range(k)]
        preorder = []
        tin = [0] * k
        tout = [0] * k
        depth = [0] * k
        # iterative DFS giving Euler intervals
        stack = [(self.root, -1, 0)]
        clock = 0
        visited = [False] * k
        while stack:
            node, par, state = stack.pop()
            if state == 0:
                visited[node] = True
                parent[node] = par
                if par >= 0:
                    children[par].append(node)
                    depth[node] = depth[par] + 1
                tin[node] = clock
                clock += 1
                preorder.append(node)
                stack.append((node, par, 1))
                for c in reversed(adj[node]):
                    if c != par:
                        stack.append((c, node, 0))
            else:
                tout[node] = clock
        data = {
            "parent": parent,
            "children": children,
            "preorder": preorder,
            "postorder": preorder[::-1],
            "tin": tin,
            "tout": tout,
            "depth": depth,
        }
        self._cache["rooted"] = data
        return data

    def parent(self, x: int) -> int:
        return self._rooted_data()["parent"][x]

    def children(self, x: int) -> list[int]:
        return self._rooted_data()["children"][x]

    def preorder(self) -> list[int]:
        return self._rooted_data()["preorder"]

    def postorder(self) -> list[int]:
        """Children before parents (reverse preorder)."""
        return self._rooted_data()["postorder"]

    def is_descendant(self, x: int, anc: int) -> bool:
        d = self._rooted_data()
        return d["tin"][anc] <= d["tin"][x] < d["tout"][anc]

    def edges_postorder(self) -> list[tuple[int, int]]:
        """``(child, parent)`` pairs, every child listed after its own children."""
        par = self._rooted_data()["parent"]
        return [(x, par[x]) for x in self.postorder() if par[x] >= 0]

    def adhesion(self, x: int) -> frozenset:
        p = self.parent(x)
        if p < 0:
            return frozenset()
        return self.bags[x] & self.bags[p]

    def top_nodes(self) -> dict[int, int]:
        """For each vertex, the node closest to the root whose bag holds it."""
        if "top" not in self._cache:
            top: dict[int, int] = {}
            for x in self.preorder():
                for v in self.bags[x]:
                    if v not in top:
                        top[v] = x
            self._cache["top"] = top
        return self._cache["top"]

    def subtree_vertices(self, x: int) -> frozenset:
        out = set()
        d = self._rooted_data()
        for y in d["preorder"][d["tin"][x] : d["tout"][x]]:
            out |= self.bags[y]
        return frozenset(out)

    def in_subtree_graph(self, v: int, x: int) -> bool:
        """Whether ``v`` lies in the union of bags below (and at) ``x``."""
        top = self.top_nodes()
        if v not in top:
            return False
        return v in self.bags[x] or self.is_descendant(top[v], x)

    def is_binary(self) -> bool:
        if self.root is None:
            return False
        return all(len(c) <= 2 for c in self._rooted_data()["children"])

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "nodes": [{"id": i, "bag": sorted(b)} for i, b in enumerate(self.bags)],
            "tree_edges": [list(e) for e in sorted(self.tree_edges)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TreeDecomposition":
        nodes = sorted(data["nodes"], key=lambda nd: nd["id"])
        ids = [nd["id"] for nd in nodes]
        if ids != list(range(len(ids))):
            raise InvalidDecompositionError("node ids must be 0..k-1")
        return cls(
            tuple(frozenset(nd["bag"]) for nd in nodes),
            frozenset(tuple(e) for e in data.get("tree_edges", [])),
            data.get("root"),
        )


def validate(g: Graph, td: TreeDecomposition) -> ValidationReport:
    k = td.node_count
    if k == 0:
        if g.vertex_count == 0:
            return ValidationReport(True)
        return ValidationReport(False, "vertex-coverage", {"vertex": 0})
    for a, b in td.tree_edges:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return ValidationReport(False, "tree", {"edge": [a, b]})
    if len(td.tree_edges) != k - 1:
        return ValidationReport(False, "tree", {"edge_count": len(td.tree_edges), "nodes": k})
    adj = td.tree_adjacency()
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != k:
        return ValidationReport(False, "tree", {"unreached_node": min(set(range(k)) - seen)})
    if td.root is not None and not (0 <= td.root < k):
        return ValidationReport(False, "tree", {"root": td.root})
    holders: dict[int, list[int]] = {}
    for x, bag in enumerate(td.bags):
        for v in bag:
            if not (0 <= v < g.vertex_count):
                return ValidationReport(False, "vertex-coverage", {"node": x, "unknown_vertex": v})
            holders.setdefault(v, []).append(x)
    for v in g.vertices:
        if v not in holders:
            return ValidationReport(False, "vertex-coverage", {"vertex": v})
    for u, v in sorted(g.edges):
        if not any(u in td.bags[x] for x in holders[v]):
            return ValidationReport(False, "edge-coverage", {"edge": [u, v]})
    for v in sorted(holders):
        nodes = set(holders[v])
        start = holders[v][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes):
            return ValidationReport(False, "running-intersection", {"vertex": v, "nodes": sorted(nodes)})
    return ValidationReport(True)


def require_valid(g: Graph, td: TreeDecomposition) -> None:
    rep = validate(g, td)
    if not rep:
        raise InvalidDecompositionError(
            f"invalid tree decomposition: {rep.violated}", {"violated": rep.violated, "witness": rep.witness}
        )


def decomposition_from_order(g: Graph, order: list[int]) -> TreeDecomposition:
    """Elimination-ordering decomposition, with subset bags merged away."""
    n = g.vertex_count
    if n == 0:
        return TreeDecomposition((frozenset(),), frozenset(), 0)
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adjacency]
    bag_of: list[frozenset] = [frozenset()] * n
    parent_vertex = [-1] * n
    for v in order:
        higher = adj[v]
        bag_of[v] = frozenset(higher | {v})
        if higher:
            parent_vertex[v] = min(higher, key=pos.__getitem__)
        hl = list(higher)
        for i, a in enumerate(hl):
            adj[a].discard(v)
            for b in hl[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
    # forest -> tree: roots of later components hang off the last root
    node_bags = [bag_of[v] for v in order]
    node_parent = [pos[parent_vertex[v]] if parent_vertex[v] >= 0 else -1 for v in order]
    roots = [i for i, p in enumerate(node_parent) if p < 0]
    for r in roots[:-1]:
        node_parent[r] = roots[-1]
    return _compress(node_bags, node_parent, roots[-1])


def _compress(bags: list[frozenset], parent: list[int], root: int) -> TreeDecomposition:
    """Merge every node whose bag is contained in its parent's bag."""
    k = len(bags)
    alive = [True] * k
    # map to representative after merging, processed from leaves upward
    children: list[list[int]] = [[] for _ in range(k)]
    for x, p in enumerate(parent):
        if p >= 0:
            children[p].append(x)
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(children[x])
    par = list(parent)
    for x in reversed(order):
        p = par[x]
        if p >= 0 and bags[x] <= bags[p]:
            alive[x] = False
            for c in children[x]:
                par[c] = p
                children[p].append(c)
            children[x] = []
    # a root contained in its only child is also redundant
    while True:
        kids = [c for c in children[root] if alive[c] and par[c] == root]
        if len(kids) == 1 and bags[root] <= bags[kids[0]]:
            alive[root] = False
            new_root = kids[0]
            par[new_root] = -1
            root = new_root
            continue
        break
    ids = {}
    for x in range(k):
        if alive[x]:
            ids[x] = len(ids)
    new_bags = [bags[x] for x in range(k) if alive[x]]
    edges = set()
    for x in range(k):
        if alive[x] and par[x] >= 0:
            edges.add((ids[x], ids[par[x]]))
    return TreeDecomposition(tuple(new_bags), frozenset(edges), ids[root])


def min_fill_order(g: Graph) -> list[int]:
    n = g.vertex_count
    adj = [set(a) for a in g.adjacency]
    alive = [True] * n

    def fill(v):
        nb = list(adj[v])
        c = 0
        for i, a in enumerate(nb):
            aa = adj[a]
            for b in nb[i + 1 :]:
                if b not in aa:
                    c += 1
        return c

    score = [fill(v) for v in range(n)]
    heap = [(score[v], len(adj[v]), v) for v in range(n)]
    heapq.heapify(heap)
    order = []
    while heap:
        f, d, v = heapq.heappop(heap)
        if not alive[v] or f != score[v] or d != len(adj[v]):
            continue
        alive[v] = False
        order.append(v)
        nb = list(adj[v])
        for a in nb:
            adj[a].discard(v)
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                if b not in adj[a]:
                    adj[a].add(b)
                    adj[b].add(a)
        touched = set(nb)
        for a in nb:
            touched |= adj[a]
        for u in touched:
            if alive[u]:
                score[u] = fill(u)
                heapq.heappush(heap, (score[u], len(adj[u]), u))
        adj[v] = set()
    return order


def exact_order(g: Graph, limit: int = 20) -> tuple[int, list[int]]:
    n = g.vertex_count
    if n > limit:
        raise TooLargeError(f"exact treewidth limited to {limit} vertices, graph has {n}")
    masks = [0] * n
    for v in range(n):
        m = 0
        for w in g.adjacency[v]:
            m |= 1 << w
        masks[v] = m
    return kernels.treewidth_dp(masks, n)


def build_decomposition(
    g: Graph,
    mode: DecompositionMode = DecompositionMode.MIN_FILL,
    limit: int = 20,
    provided: TreeDecomposition | None = None,
) -> TreeDecomposition:
    if mode is DecompositionMode.PROVIDED:
        if provided is None:
            raise ValueError("PROVIDED mode needs a decomposition")
        require_valid(g, provided)
        return provided if provided.root is not None else provided.rooted(0)
    if mode is DecompositionMode.EXACT_SMALL:
        _, order = exact_order(g, limit)
    else:
        order = min_fill_order(g)
    td = decomposition_from_order(g, order)
    return td


def chordal_complete(g: Graph, td: TreeDecomposition) -> Graph:
    require_valid(g, td)
    edges = set(g.edges)
    for bag in td.bags:
        b = sorted(bag)
        for i, u in enumerate(b):
            for v in b[i + 1 :]:
                edges.add((u, v))
    return Graph(g.vertex_count, frozenset(edges))


def binarize_and_root(td: TreeDecomposition, root: int | None = None) -> TreeDecomposition:
    """Root the tree and split high-degree nodes into chains of bag copies."""
    r = td.root if root is None else root
    if r is None:
        r = 0
    rooted = td.rooted(r)
    bags = list(td.bags)
    edges = set()
    for x in rooted.preorder():
        kids = list(rooted.children(x))
        attach = x
        while kids:
            if len(kids) <= 2:
                for c in kids:
                    edges.add((attach, c))
                break
            first = kids.pop(0)
            edges.add((attach, first))
            dup = len(bags)
            bags.append(td.bags[x])
            edges.add((attach, dup))
            attach = dup
    return TreeDecomposition(tuple(bags), frozenset(edges), r)


def ensure_rooted_binary(td: TreeDecomposition) -> TreeDecomposition:
    if td.root is not None and td.is_binary():
        return td
    return binarize_and_root(td)


def restrict(td: TreeDecomposition, x: int) -> tuple[TreeDecomposition, frozenset]:
    """Sub-decomposition of the subtree rooted at ``x`` and the vertices it covers."""
    d = td._rooted_data()
    nodes = d["preorder"][d["tin"][x] : d["tout"][x]]
    ids = {y: i for i, y in enumerate(nodes)}
    edges = {(ids[y], ids[td.parent(y)]) for y in nodes if y != x}
    sub = TreeDecomposition(tuple(td.bags[y] for y in nodes), frozenset(edges), 0)
    return sub, td.subtree_vertices(x)


def single_bag(g: Graph) -> TreeDecomposition:
    return TreeDecomposition((frozenset(g.vertices),), frozenset(), 0)


def path_decomposition(bags: Iterable[Iterable[int]]) -> TreeDecomposition:
    bags = [frozenset(b) for b in bags]
    return TreeDecomposition(tuple(bags), frozenset((i, i + 1) for i in range(len(bags) - 1)), 0)
