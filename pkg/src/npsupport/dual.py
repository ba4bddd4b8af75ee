"""Sparsification by pushing and dual supports for graph systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .model import (
    Graph,
    GraphSystem,
    PiercingFamilyError,
    PreconditionError,
    Provenance,
    SubgraphFamily,
    Support,
    SupportError,
    attach_pendants,
    check_members_connected,
    containment_maximal,
    induced_connected,
)
from .treedecomp import TreeDecomposition, chordal_complete, ensure_rooted_binary, require_valid


def sparse_width_bound(t: int) -> int:
    return 2 ** (4 * (t + 1))


@dataclass(frozen=True)
class SparsityReport:
    k: int
    worst_bag: int | None
    members: tuple = ()


def sparsity(g: Graph, fam: SubgraphFamily, td: TreeDecomposition) -> SparsityReport:
    require_valid(g, td)
    index = fam.vertex_index()
    best, worst, worst_members = 0, None, ()
    for x, bag in enumerate(td.bags):
        hit = {i for v in bag for i in index.get(v, ())}
        if len(hit) > best:
            best, worst, worst_members = len(hit), x, tuple(sorted(hit))
    return SparsityReport(best, worst, worst_members)


def k_sds(
    g: Graph,
    fam: SubgraphFamily,
    td: TreeDecomposition,
    labels: Sequence | None = None,
) -> Support:
    """Clique on the members meeting each bag."""
    check_members_connected(g, fam)
    require_valid(g, td)
    labels = list(range(len(fam))) if labels is None else list(labels)
    if len(labels) != len(fam):
        raise ValueError("need one label per member")
    index = fam.vertex_index()
    edges = set()
    k = 0
    for bag in td.bags:
        hit = sorted({i for v in bag for i in index.get(v, ())})
        k = max(k, len(hit))
        for a, i in enumerate(hit):
            for j in hit[a + 1 :]:
                edges.add((labels[i], labels[j]))
    return Support.from_label_edges(labels, edges, Provenance("k-sds", width=max(k - 1, 0)))


@dataclass(frozen=True)
class PushRecord:
    edge: tuple
    trace: tuple
    pushed: int
    pusher: int
    before: frozenset
    after: frozenset
    connecting_edge: tuple
    pusher_set: frozenset = frozenset()


@dataclass
class PushResult:
    members: list
    ledger: list
    unique_map: dict
    decomposition: TreeDecomposition
    host: Graph
    adhesion_counts: dict = field(default_factory=dict)

    def family(self) -> SubgraphFamily:
        return SubgraphFamily(tuple(self.members), "H")

    def representatives(self) -> list[int]:
        return sorted(set(self.unique_map.values()))


def _inside_fn(td: TreeDecomposition):
    top = td.top_nodes()

    def inside(v: int, x: int) -> bool:
        if v in td.bags[x]:
            return True
        t = top.get(v)
        return t is not None and td.is_descendant(t, x)

    return inside


def push_sparsify(system: GraphSystem, td: TreeDecomposition) -> PushResult:
    """Shrink members bottom-up so that few distinct traces cross each adhesion.

    The family must be containment-free.  Each pushed member ends up as its set
    difference with the pushing member, and the ledger records an edge joining
    the two so that dual connectivity can be recovered later.
    """
    g = system.graph
    fam = system.family_h
    red = containment_maximal(fam)
    if red.successor:
        child, parent = min(red.successor.items())
        raise PreconditionError(
            "family is not containment-free", {"contained": child, "container": parent}
        )
    require_valid(g, td)
    td = ensure_rooted_binary(td)
    host = chordal_complete(g, td)
    inside = _inside_fn(td)
    cur = list(fam.members)
    index = fam.vertex_index()
    ledger: list[PushRecord] = []
    counts: dict = {}

    for x, rho in td.edges_postorder():
        adh = td.bags[x] & td.bags[rho]
        cands = sorted({i for v in adh for i in index.get(v, ()) if v in cur[i]})
        groups: dict[frozenset, list[int]] = {}
        for i in cands:
            groups.setdefault(frozenset(cur[i] & adh), []).append(i)
        for s in sorted(groups, key=lambda fs: sorted(fs)):
            group = groups[s]
            below = {i: frozenset(v for v in cur[i] if inside(v, x)) for i in group}
            minimal = [i for i in group if not any(below[j] < below[i] for j in group)]
            pusher = min(minimal)
            for i in group:
                if i == pusher:
                    continue
                extra = below[i] - below[pusher]
                if not extra:
                    continue
                diff = cur[i] - cur[pusher]
                if extra != diff:
                    raise PiercingFamilyError(
                        f"member {i} differs from member {pusher} outside the subtree of node {x}",
                        {"pushed": i, "pusher": pusher, "edge": [x, rho]},
                    )
                if not induced_connected(g, diff):
                    raise PiercingFamilyError(
                        f"member {i} minus member {pusher} is disconnected",
                        {"pushed": i, "pusher": pusher},
                    )
                link = None
                for u in sorted(diff):
                    nb = sorted(w for w in g.neighbors(u) if w in cur[pusher])
                    if nb:
                        link = (u, nb[0])
                        break
                if link is None:
                    raise PiercingFamilyError(
                        f"no edge joins pushed member {i} to member {pusher}",
                        {"pushed": i, "pusher": pusher},
                    )
                ledger.append(
                    PushRecord((x, rho), tuple(sorted(s)), i, pusher, cur[i], diff, link, cur[pusher])
                )
                cur[i] = diff
        # distinct traces below the edge after processing it
        after = {frozenset(v for v in cur[i] if inside(v, x)) for i in cands if cur[i] & adh}
        counts[(x, rho)] = len(after)

    unique_map: dict[int, int] = {}
    first: dict[frozenset, int] = {}
    for i, m in enumerate(cur):
        unique_map[i] = first.setdefault(m, i)
    return PushResult(cur, ledger, unique_map, td, host, counts)


def assemble_pushed(g: Graph, pushed: PushResult, labels: Sequence) -> tuple[set, int]:
    """Support edges and decomposition width for a pushed family.

    Starts from the bag cliques over ``unique`` members.  Every duplicate hangs
    off its representative through a new leaf bag, and every pushed member is
    joined to its pusher by routing the pusher through the tree to a bag that
    holds the pushed member.  The returned width is that of the resulting
    decomposition, so it bounds the treewidth of the returned support.
    """
    td = pushed.decomposition
    reps = pushed.representatives()
    index = SubgraphFamily(tuple(pushed.members[i] for i in reps), "H").vertex_index()
    bags = [{reps[i] for v in bag for i in index.get(v, ())} for bag in td.bags]
    adj = [list(nb) for nb in td.tree_adjacency()]
    where: dict[int, int] = {}
    for x, bag in enumerate(bags):
        for i in bag:
            where.setdefault(i, x)
    edges: set = set()
    for bag in bags:
        bs = sorted(bag)
        for a, i in enumerate(bs):
            for j in bs[a + 1 :]:
                edges.add((i, j))
    for i, r in sorted(pushed.unique_map.items()):
        if i != r:
            x = len(bags)
            bags.append({i, r})
            adj.append([where[r]])
            adj[where[r]].append(x)
            where[i] = x
            edges.add((i, r))
    for rec in pushed.ledger:
        i, p = rec.pushed, rec.pusher
        if (min(i, p), max(i, p)) in edges:
            continue
        edges.add((min(i, p), max(i, p)))
        start = where[i]
        prev = {start: -1}
        queue = [start]
        head = 0
        target = -1
        while head < len(queue):
            y = queue[head]
            head += 1
            if p in bags[y]:
                target = y
                break
            for z in adj[y]:
                if z not in prev:
                    prev[z] = y
                    queue.append(z)
        y = prev[target]
        while y != -1:
            bags[y].add(p)
            y = prev[y]
    width = max((len(b) for b in bags), default=1) - 1
    return {(labels[i], labels[j]) for i, j in edges}, max(width, 0)


def dual_support(system: GraphSystem, td: TreeDecomposition, push: bool | None = None) -> Support:
    """Dual support of treewidth at most ``2**(4(t+1))`` for a non-piercing family.

    ``push=None`` skips sparsification when the decomposition is already sparse
    enough for the maximal members; ``push=True`` always runs it.
    """
    g = system.graph
    require_valid(g, td)
    t = td.width
    bound = sparse_width_bound(t)
    fam = system.family_h
    red = containment_maximal(fam)
    maxfam = red.subfamily(fam)
    if push is None:
        push = sparsity(g, maxfam, td).k > bound
    extra = {"input_width": t, "pushed": bool(push)}
    if push:
        pushed = push_sparsify(GraphSystem(g, maxfam, system.coloring), td)
        edges, width = assemble_pushed(g, pushed, red.kept)
        extra.update(pushes=len(pushed.ledger), unique=len(pushed.representatives()))
    else:
        core = k_sds(g, maxfam, td, labels=list(red.kept))
        edges, width = core.label_edges(), core.provenance.width
    sup = Support.from_label_edges(sorted(red.kept), edges)
    sup = attach_pendants(sup, red.successor)
    if width > bound:
        raise SupportError(f"dual support width {width} exceeds {bound}")
    return sup.with_provenance(Provenance("dual", width=width, width_bound=bound, extra=extra))


def star_dual_example(n: int) -> tuple[GraphSystem, TreeDecomposition]:
    """``K_{1,C(n,2)}`` with one member per leaf of the ``n``-clique pattern.

    Leaf ``e`` (for the pair ``{i,j}``) joins members ``i`` and ``j``; the centre
    lies in every member, so each member is the centre plus its ``n-1`` leaves.
    """
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    g = Graph.from_edges(len(pairs) + 1, [(0, e + 1) for e in range(len(pairs))])
    members = [{0} | {e + 1 for e, p in enumerate(pairs) if i in p} for i in range(n)]
    td = TreeDecomposition(
        tuple(frozenset({0, e + 1}) for e in range(len(pairs))),
        frozenset((0, e) for e in range(1, len(pairs))),
        0,
    )
    return GraphSystem(g, SubgraphFamily.of(members)), td
