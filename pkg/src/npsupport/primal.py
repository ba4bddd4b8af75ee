"""Easy decompositions and primal supports for graph systems.

A decomposition is *easy* for a graph system when, across every tree edge,
each member whose blue vertices occur on both sides of the edge keeps a blue
vertex in the adhesion.  Projecting the bags of such a decomposition onto the
blue vertices and turning each projected bag into a clique yields a primal
support whose treewidth is the projected width.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .model import Coloring, Graph, GraphSystem, Provenance, SubgraphFamily, Support, SupportError
from .treedecomp import TreeDecomposition, ensure_rooted_binary, require_valid

log = logging.getLogger(__name__)


class EasinessFailure(SupportError):
    """Internal invariant broken while making a decomposition easy."""


def easy_width_bound(t: int) -> int:
    return 2 ** (t + 2) + t


@dataclass(frozen=True)
class EasyReport:
    easy: bool
    adhesion: frozenset | None = None
    member: int | None = None
    edge: tuple | None = None

    def __bool__(self):
        return self.easy


class _SideIndex:
    """Answers 'is vertex v inside G_x' for a rooted tree whose bags may grow."""

    def __init__(self, td: TreeDecomposition, bags: list[set]):
        self.td = td
        self.bags = bags
        self.top: dict[int, int] = {}
        depth = {}
        for x in td.preorder():
            p = td.parent(x)
            depth[x] = 0 if p < 0 else depth[p] + 1
            for v in bags[x]:
                if v not in self.top:
                    self.top[v] = x
        self.depth = depth

    def inside(self, v: int, x: int) -> bool:
        if v in self.bags[x]:
            return True
        t = self.top.get(v)
        return t is not None and self.td.is_descendant(t, x)

    def add(self, v: int, x: int) -> None:
        self.bags[x].add(v)
        t = self.top.get(v)
        if t is None or self.depth[x] < self.depth[t]:
            self.top[v] = x


def _relevant(side: _SideIndex, x: int, blue_h: frozenset) -> bool:
    """Blue vertices of the member lie both inside and outside ``G_x``."""
    has_in = has_out = False
    for b in blue_h:
        if side.inside(b, x):
            has_in = True
        else:
            has_out = True
        if has_in and has_out:
            return True
    return False


def _check_easy(system: GraphSystem, td: TreeDecomposition, bags: list[set]) -> EasyReport:
    members = system.family_h.members
    blue = system.coloring.blue()
    blue_parts = [h & blue for h in members]
    index = system.family_h.vertex_index()
    side = _SideIndex(td, bags)
    for x, p in td.edges_postorder():
        adh = bags[x] & bags[p]
        cands = sorted({i for v in adh for i in index.get(v, ())})
        for i in cands:
            if blue_parts[i] & adh:
                continue
            if _relevant(side, x, blue_parts[i]):
                return EasyReport(False, frozenset(adh), i, (x, p))
    return EasyReport(True)


def is_easy(system: GraphSystem, td: TreeDecomposition) -> EasyReport:
    require_valid(system.graph, td)
    if td.root is None:
        td = td.rooted(0)
    return _check_easy(system, td, [set(b) for b in td.bags])


@dataclass
class MakeEasyResult:
    decomposition: TreeDecomposition
    input_width: int
    width: int
    width_bound: int
    fallback_routes: int = 0
    notes: list = field(default_factory=list)

    @property
    def within_bound(self) -> bool:
        return self.width <= self.width_bound


def _route(td: TreeDecomposition, side: _SideIndex, c: int, x: int) -> int:
    """Add ``c`` to every bag on the tree path from ``x`` to the nearest bag holding ``c``."""
    adj = td.tree_adjacency()
    prev = {x: -1}
    queue = [x]
    target = -1
    head = 0
    while head < len(queue):
        y = queue[head]
        head += 1
        if c in side.bags[y]:
            target = y
            break
        for z in adj[y]:
            if z not in prev:
                prev[z] = y
                queue.append(z)
    if target < 0:
        raise EasinessFailure(f"vertex {c} is in no bag")
    added = 0
    y = prev[target]
    while y != -1:
        if c not in side.bags[y]:
            side.add(c, y)
            added += 1
        y = prev[y]
    return added


def make_easy(system: GraphSystem, td: TreeDecomposition) -> MakeEasyResult:
    """Return an easy decomposition obtained by only adding vertices to bags.

    Works bottom-up.  For each child edge and each red trace ``S`` on the
    adhesion, the member with the smallest trace below the edge donates one
    blue vertex from the child bag to the parent bag.  Members that are still
    uncovered afterwards get a blue vertex from above routed down instead.
    """
    g = system.graph
    require_valid(g, td)
    t = td.width
    td = ensure_rooted_binary(td)
    members = system.family_h.members
    blue = system.coloring.blue()
    blue_parts = [h & blue for h in members]
    index = system.family_h.vertex_index()
    bags = [set(b) for b in td.bags]
    side = _SideIndex(td, bags)
    routes = 0
    notes = []

    for x, rho in td.edges_postorder():
        adh = bags[x] & bags[rho]
        cands = sorted({i for v in adh for i in index.get(v, ())})
        groups: dict[frozenset, list[int]] = {}
        for i in cands:
            if blue_parts[i] & adh:
                continue
            if not _relevant(side, x, blue_parts[i]):
                continue
            groups.setdefault(frozenset(members[i] & adh), []).append(i)
        for s in sorted(groups, key=lambda fs: sorted(fs)):
            group = groups[s]
            below = {i: frozenset(v for v in members[i] if side.inside(v, x)) for i in group}
            minimal = [i for i in group if not any(below[j] < below[i] for j in group)]
            h0 = min(minimal)
            donors = sorted(blue_parts[h0] & bags[x])
            if not donors:
                raise EasinessFailure(
                    f"member {h0} has no blue vertex in the child bag of edge {(x, rho)}"
                )
            b = donors[0]
            side.add(b, rho)
            adh = bags[x] & bags[rho]
            left = [i for i in group if not (blue_parts[i] & adh)]
            while left:
                i = left[0]
                outside = sorted(v for v in blue_parts[i] if not side.inside(v, x))
                # prefer a vertex shared by every remaining violator
                shared = [v for v in outside if all(v in blue_parts[j] for j in left)]
                c = (shared or outside)[0]
                _route(td, side, c, x)
                routes += 1
                notes.append({"edge": [x, rho], "trace": sorted(s), "routed": c})
                adh = bags[x] & bags[rho]
                left = [j for j in left if not (blue_parts[j] & adh)]

    new_td = TreeDecomposition(tuple(frozenset(b) for b in bags), td.tree_edges, td.root)
    rep = _check_easy(system, new_td, [set(b) for b in new_td.bags])
    if not rep:
        raise EasinessFailure(f"make_easy left member {rep.member} uncovered at edge {rep.edge}")
    res = MakeEasyResult(new_td, t, new_td.width, easy_width_bound(t), routes, notes)
    if not res.within_bound:
        log.warning("easy decomposition width %d exceeds %d", res.width, res.width_bound)
    return res


def primal_support(system: GraphSystem, td: TreeDecomposition) -> Support:
    """Primal support from an easy decomposition: clique on each projected bag."""
    rep = is_easy(system, td)
    if not rep:
        raise SupportError(f"decomposition is not easy (member {rep.member} at edge {rep.edge})")
    blue = system.coloring.blue()
    edges = set()
    width = -1
    for bag in td.bags:
        proj = sorted(bag & blue)
        width = max(width, len(proj) - 1)
        for i, u in enumerate(proj):
            for v in proj[i + 1 :]:
                edges.add((u, v))
    return Support.from_label_edges(
        sorted(blue), edges, Provenance("primal", width=max(width, 0))
    )


def build_primal_support(system: GraphSystem, td: TreeDecomposition) -> Support:
    """make_easy followed by the projection."""
    res = make_easy(system, td)
    sup = primal_support(system, res.decomposition)
    return sup.with_provenance(
        Provenance(
            "primal",
            width=sup.provenance.width,
            width_bound=res.width_bound,
            extra={"input_width": res.input_width, "easy_width": res.width, "fallback_routes": res.fallback_routes},
        )
    )


def star_example(n: int) -> tuple[GraphSystem, TreeDecomposition]:
    """Star with red centre 0 and blue leaves, one member per pair of leaves."""
    g = Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)])
    fam = SubgraphFamily.of([{0, i, j} for i in range(1, n + 1) for j in range(i + 1, n + 1)])
    coloring = Coloring.from_blue(n + 1, range(1, n + 1))
    td = TreeDecomposition(
        tuple(frozenset({0, i}) for i in range(1, n + 1)),
        frozenset((0, i) for i in range(1, n)),
        0,
    )
    return GraphSystem(g, fam, coloring), td
