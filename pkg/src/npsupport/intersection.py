"""Intersection supports for bounded-treewidth hosts.

The pipeline colours a vertex blue when it lies in some H and some K, makes the
decomposition easy for ``(G, K)`` under that colouring (so every K crossing a
tree edge is hit by an H inside the adhesion), sparsifies H by pushing and
finishes with the bag-clique construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dual import assemble_pushed, k_sds, push_sparsify, sparse_width_bound, sparsity
from .model import (
    Coloring,
    GraphSystem,
    IntersectionSystem,
    Provenance,
    SubgraphFamily,
    Support,
    SupportError,
    attach_pendants,
    containment_maximal,
)
from .primal import easy_width_bound, is_easy, make_easy
from .treedecomp import TreeDecomposition, require_valid


def intersection_width_bound(t: int) -> int:
    return sparse_width_bound(easy_width_bound(t))


@dataclass(frozen=True)
class KEasyReport:
    easy: bool
    k_index: int | None = None
    adhesion: frozenset | None = None
    edge: tuple | None = None

    def __bool__(self):
        return self.easy

    def to_json(self) -> dict:
        return {
            "k": self.k_index,
            "adhesion": sorted(self.adhesion) if self.adhesion is not None else None,
            "edge": list(self.edge) if self.edge is not None else None,
        }


def phi_coloring(sys: IntersectionSystem) -> Coloring:
    """Blue exactly on vertices covered by both families."""
    cover_h = set().union(*sys.family_h.members) if len(sys.family_h) else set()
    cover_k = set().union(*sys.family_k.members) if len(sys.family_k) else set()
    return Coloring.from_blue(sys.graph.vertex_count, cover_h & cover_k)


def is_k_easy(sys: IntersectionSystem, td: TreeDecomposition, strict: bool = False) -> KEasyReport:
    """K-easiness of ``td``.

    The default form only asks this of a K whose doubly covered vertices lie on
    both sides of the tree edge.  ``strict=True`` asks it of every K meeting
    the adhesion.
    """
    require_valid(sys.graph, td)
    if td.root is None:
        td = td.rooted(0)
    phi = phi_coloring(sys)
    if not strict:
        rep = is_easy(GraphSystem(sys.graph, sys.family_k, phi), td)
        if rep:
            return KEasyReport(True)
        return KEasyReport(False, rep.member, rep.adhesion, rep.edge)
    blue = phi.blue()
    for x, p in td.edges_postorder():
        adh = td.bags[x] & td.bags[p]
        for j, k in enumerate(sys.family_k):
            hit = k & adh
            if hit and not (hit & blue):
                return KEasyReport(False, j, frozenset(adh), (x, p))
    return KEasyReport(True)


def make_k_easy(sys: IntersectionSystem, td: TreeDecomposition) -> TreeDecomposition:
    return make_easy(GraphSystem(sys.graph, sys.family_k, phi_coloring(sys)), td).decomposition


def intersection_support(
    sys: IntersectionSystem, td: TreeDecomposition, push: bool | None = None
) -> Support:
    """Intersection support whose decomposition width is at most
    :func:`intersection_width_bound` of the input width.

    ``push`` behaves as in :func:`npsupport.dual.dual_support`.
    """
    g = sys.graph
    require_valid(g, td)
    t = td.width
    phi = phi_coloring(sys)
    easy = make_easy(GraphSystem(g, sys.family_k, phi), td)
    td1 = easy.decomposition
    t1 = td1.width
    red = containment_maximal(sys.family_h)
    maxfam = red.subfamily(sys.family_h)
    local_bound = sparse_width_bound(t1)
    if push is None:
        push = sparsity(g, maxfam, td1).k > local_bound
    extra: dict = {"input_width": t, "k_easy_width": t1, "pushed": bool(push)}
    if push:
        pushed = push_sparsify(GraphSystem(g, maxfam), td1)
        reps = pushed.representatives()
        rep_members = SubgraphFamily(tuple(pushed.members[i] for i in reps), "H")
        rep_sys = IntersectionSystem(g, rep_members, sys.family_k)
        again = is_k_easy(rep_sys, pushed.decomposition)
        if not again:
            raise SupportError(
                f"sparsification broke K-easiness at K[{again.k_index}] on edge {again.edge}"
            )
        edges, width = assemble_pushed(g, pushed, red.kept)
        extra.update(pushes=len(pushed.ledger), unique=len(reps))
    else:
        core = k_sds(g, maxfam, td1, labels=list(red.kept))
        edges, width = core.label_edges(), core.provenance.width
    bound = intersection_width_bound(t)
    ledger = [
        {"stage": "input", "width": t, "bound": t},
        {"stage": "k-easy", "width": t1, "bound": easy_width_bound(t)},
        {"stage": "support", "width": width, "bound": bound},
    ]
    for a, b in zip(ledger, ledger[1:]):
        if b["bound"] < a["bound"]:
            raise SupportError("width ledger bounds are not monotone")
    for row in ledger:
        if row["width"] > row["bound"]:
            raise SupportError(f"{row['stage']} width {row['width']} exceeds {row['bound']}")
    extra["width_ledger"] = ledger
    sup = Support.from_label_edges(sorted(red.kept), edges)
    sup = attach_pendants(sup, red.successor)
    return sup.with_provenance(
        Provenance("intersection", width=width, width_bound=bound, extra=extra)
    )
