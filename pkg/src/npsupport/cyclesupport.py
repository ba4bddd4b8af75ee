"""Cycle systems and outerplanar supports.

A cycle system is a cycle ``0..n-1`` (clockwise) together with families of
arbitrary vertex subsets.  Outerplanar graph systems are turned into cycle
systems by reading off the outer face, and supports are built by recursively
cutting the cycle along short chords until every member is a single arc.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import (
    Graph,
    GraphSystem,
    IntersectionSystem,
    PreconditionError,
    Provenance,
    SubgraphFamily,
    Support,
    SupportError,
)
from . import verify
from .treedecomp import build_decomposition


def min_fill_order_width(g: Graph) -> int:
    return build_decomposition(g).width

log = logging.getLogger(__name__)


class PatternError(PreconditionError):
    """The cycle system contains a forbidden alternation pattern."""


class RecursionInvariantError(SupportError):
    pass


@dataclass(frozen=True)
class CycleSystem:
    n: int
    family_h: SubgraphFamily
    family_k: SubgraphFamily | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("cycle needs at least one vertex")
        for fam in (self.family_h, self.family_k):
            if fam is None:
                continue
            for i, m in enumerate(fam):
                if not all(0 <= v < self.n for v in m):
                    raise ValueError(f"member {fam.family_name}[{i}] leaves the cycle")

    @classmethod
    def of(cls, n: int, hs: Iterable[Iterable[int]], ks: Iterable[Iterable[int]] | None = None) -> "CycleSystem":
        return cls(n, SubgraphFamily.of(hs, "H"), None if ks is None else SubgraphFamily.of(ks, "K"))

    def k_or_singletons(self) -> SubgraphFamily:
        if self.family_k is not None:
            return self.family_k
        return SubgraphFamily.of([{v} for v in range(self.n)], "K")


@dataclass(frozen=True)
class Run:
    start: int
    end: int
    length: int

    def vertices(self, n: int) -> list[int]:
        return [(self.start + i) % n for i in range(self.length)]


@dataclass(frozen=True)
class RunDecomposition:
    runs: tuple
    chord_lengths: tuple
    min_chord: int | None

    @property
    def count(self) -> int:
        return len(self.runs)

    def chord(self, i: int) -> tuple[int, int]:
        """Endpoints ``(t_i, s_{i+1})`` of chord ``i``."""
        return self.runs[i].end, self.runs[(i + 1) % len(self.runs)].start


# --- runs on a cyclic sequence ----------------------------------------------

def _runs_on(cyc: Sequence[int], pos: dict, member: Iterable[int]) -> list[tuple[int, int]]:
    """Maximal runs of ``member`` on the cyclic sequence as ``(start_pos, length)``.

    Ordered clockwise from the run with the smallest start position.
    """
    L = len(cyc)
    ps = sorted(pos[v] for v in member if v in pos)
    if not ps:
        return []
    if len(ps) == L:
        return [(0, L)]
    runs = []
    start = prev = ps[0]
    for p in ps[1:]:
        if p == prev + 1:
            prev = p
            continue
        runs.append((start, prev - start + 1))
        start = prev = p
    runs.append((start, prev - start + 1))
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][0] + runs[-1][1] == L:
        s, ln = runs.pop()
        runs[0] = (s, ln + runs[0][1])
        runs.sort()
    return runs


def _chords(L: int, runs: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """``(length, end_pos, next_start_pos)`` for each chord between consecutive runs."""
    out = []
    k = len(runs)
    for i in range(k):
        s, ln = runs[i]
        t = (s + ln - 1) % L
        s2 = runs[(i + 1) % k][0]
        gap = (s2 - t) % L
        out.append((gap + 1, t, s2))
    return out


def run_decompose(cs: CycleSystem, member: Iterable[int]) -> RunDecomposition:
    member = list(member)
    if not member:
        raise ValueError("empty member")
    cyc = list(range(cs.n))
    pos = {v: v for v in cyc}
    runs = _runs_on(cyc, pos, member)
    rs = tuple(Run(s, (s + ln - 1) % cs.n, ln) for s, ln in runs)
    if len(rs) == 1:
        return RunDecomposition(rs, (), None)
    chords = _chords(cs.n, runs)
    lengths = tuple(c[0] for c in chords)
    best = min(range(len(lengths)), key=lambda i: (lengths[i], i))
    return RunDecomposition(rs, lengths, best)


def total_extra_runs(cyc: Sequence[int], members: Iterable[Iterable[int]]) -> int:
    pos = {v: i for i, v in enumerate(cyc)}
    return sum(max(len(_runs_on(cyc, pos, m)) - 1, 0) for m in members)


# --- pattern classifiers ------------------------------------------------------

def _alternation(n: int, a: frozenset, b: frozenset) -> tuple[int, int, int, int] | None:
    """Four vertices ``a1, b1, a2, b2`` in cyclic order, or None.  ``a`` and ``b`` disjoint."""
    seq = sorted([(v, 0) for v in a] + [(v, 1) for v in b])
    if len(seq) < 4:
        return None
    blocks: list[list] = []
    for v, sym in seq:
        if blocks and blocks[-1][0] == sym:
            continue
        blocks.append([sym, v])
    if len(blocks) > 1 and blocks[0][0] == blocks[-1][0]:
        # wrap-around: the last block continues into the first
        blocks[0][1] = blocks[-1][1]
        blocks.pop()
    if len(blocks) < 4:
        return None
    first_a = next(i for i, blk in enumerate(blocks) if blk[0] == 0)
    picked = [blocks[(first_a + k) % len(blocks)][1] for k in range(4)]
    return tuple(picked)


@dataclass(frozen=True)
class PatternWitness:
    clause: str
    first: int
    second: int
    vertices: tuple

    def to_json(self) -> dict:
        return {
            "clause": self.clause,
            "first": self.first,
            "second": self.second,
            "vertices": list(self.vertices),
        }


def classify_axax(cs: CycleSystem, fam: SubgraphFamily | None = None) -> PatternWitness | None:
    """None when axax-free, otherwise the first ordered offending pair."""
    fam = cs.family_h if fam is None else fam
    members = fam.members
    for i, h in enumerate(members):
        for j, h2 in enumerate(members):
            if i == j:
                continue
            alt = _alternation(cs.n, h - h2, h2)
            if alt:
                return PatternWitness(f"axax-{fam.family_name}", i, j, alt)
    return None


def classify_abab(cs: CycleSystem, fam: SubgraphFamily | None = None) -> PatternWitness | None:
    fam = cs.family_h if fam is None else fam
    members = fam.members
    for i, h in enumerate(members):
        for j in range(i + 1, len(members)):
            h2 = members[j]
            alt = _alternation(cs.n, h - h2, h2 - h)
            if alt:
                return PatternWitness(f"abab-{fam.family_name}", i, j, alt)
    return None


def classify_strong_axax(cs: CycleSystem) -> PatternWitness | None:
    w = classify_axax(cs, cs.family_h)
    if w:
        return w
    ks = cs.k_or_singletons()
    w = classify_axax(cs, ks)
    if w:
        return w
    for i, h in enumerate(cs.family_h):
        for j, k in enumerate(ks):
            if h & k:
                continue
            alt = _alternation(cs.n, h, k)
            if alt:
                return PatternWitness("intersection", i, j, alt)
    return None


# --- reduction ----------------------------------------------------------------

@dataclass(frozen=True)
class ReducedSystem:
    n: int
    h: dict
    k: list
    vertex_map: dict
    isolated: tuple


def reduce(cs: CycleSystem) -> tuple[CycleSystem | None, dict]:
    """Drop cycle vertices that are not in both some H and some K.

    Returns the spliced system (or None when a family empties completely) and
    the map from old to new vertex ids.
    """
    r = _reduce(cs)
    if r.n == 0 or not r.h or not r.k:
        return None, r.vertex_map
    hs = [r.h[i] for i in sorted(r.h)]
    return CycleSystem.of(r.n, hs, r.k), r.vertex_map


def _reduce(cs: CycleSystem) -> ReducedSystem:
    ks = cs.k_or_singletons()
    cover_h = set().union(*cs.family_h.members) if len(cs.family_h) else set()
    cover_k = set().union(*ks.members) if len(ks) else set()
    keep = sorted(cover_h & cover_k)
    vmap = {v: i for i, v in enumerate(keep)}
    h = {}
    isolated = []
    for i, m in enumerate(cs.family_h):
        mm = frozenset(vmap[v] for v in m if v in vmap)
        if mm:
            h[i] = mm
        else:
            isolated.append(i)
    k = []
    for m in ks:
        mm = frozenset(vmap[v] for v in m if v in vmap)
        if mm:
            k.append(mm)
    return ReducedSystem(len(keep), h, k, vmap, tuple(isolated))


# --- containment --------------------------------------------------------------

def _strictly_inside(L: int, inner: tuple[int, int], outer: tuple[int, int]) -> bool:
    (s, ln), (s2, ln2) = inner, outer
    off = (s - s2) % L
    return off >= 1 and off + ln - 1 <= ln2 - 2


def strict_containment_maximal(cs: CycleSystem, fam: SubgraphFamily | None = None):
    """Maximal members under strict arc containment, with a successor map."""
    fam = cs.family_h if fam is None else fam
    cyc = list(range(cs.n))
    pos = {v: v for v in cyc}
    arcs = {}
    for i, m in enumerate(fam):
        rs = _runs_on(cyc, pos, m)
        if len(rs) != 1:
            raise PreconditionError(f"member {i} is not a single run", {"member": i})
        arcs[i] = rs[0]
    kept, succ = _strict_reduce(cs.n, arcs)
    return tuple(kept), succ


def _strict_reduce(L: int, arcs: dict) -> tuple[list, dict]:
    labels = sorted(arcs, key=lambda x: (-arcs[x][1], _label_key(x)))
    kept: list = []
    succ: dict = {}
    for lab in labels:
        hosts = [q for q in kept if _strictly_inside(L, arcs[lab], arcs[q])]
        if hosts:
            succ[lab] = min(hosts, key=_label_key)
        else:
            kept.append(lab)
    return sorted(kept, key=_label_key), succ


def _label_key(x):
    return (0, x) if isinstance(x, int) else (1, repr(x))


def _containment_reduce(h: dict) -> tuple[dict, dict]:
    labels = sorted(h, key=lambda x: (-len(h[x]), _label_key(x)))
    kept: list = []
    succ: dict = {}
    for lab in labels:
        hosts = [q for q in kept if h[lab] <= h[q]]
        if hosts:
            succ[lab] = min(hosts, key=_label_key)
        else:
            kept.append(lab)
    return {lab: h[lab] for lab in kept}, succ


# --- lex cycle ----------------------------------------------------------------

def _lex_order(L: int, arcs: dict, rank: dict | None = None) -> list:
    rank = rank or {}
    return sorted(arcs, key=lambda x: (arcs[x][0], arcs[x][1], rank.get(x, 0), _label_key(x)))


def lex_cycle(cs: CycleSystem, fam: SubgraphFamily | None = None) -> list[int]:
    fam = cs.family_h if fam is None else fam
    kept, succ = strict_containment_maximal(cs, fam)
    if succ:
        raise PreconditionError("family is not strict-containment free", {"contained": min(succ)})
    cyc = list(range(cs.n))
    pos = {v: v for v in cyc}
    arcs = {i: _runs_on(cyc, pos, m)[0] for i, m in enumerate(fam)}
    return _lex_order(cs.n, arcs)


def _cycle_edges(order: list) -> set:
    if len(order) < 2:
        return set()
    if len(order) == 2:
        return {(order[0], order[1])}
    return {(order[i], order[(i + 1) % len(order)]) for i in range(len(order))}


# --- recursion ------------------------------------------------------------------

@dataclass
class _Stats:
    splits_k: int = 0
    splits_h: int = 0
    pendants: int = 0
    notes: list = field(default_factory=list)


def _arc(cyc: Sequence[int], i: int, j: int) -> list[int]:
    """Closed arc from position ``i`` to ``j`` clockwise."""
    L = len(cyc)
    ln = (j - i) % L + 1
    return [cyc[(i + d) % L] for d in range(ln)]


def _solve_single_h(
    cyc: list, h: dict, ks: list, edges: set, stats: _Stats, work: list, rank: dict | None = None
) -> None:
    """All H members are single runs on ``cyc``; cut along the shortest K chord.

    ``rank`` breaks ties between identical arcs in the lex cycle so that the two
    members glued to the other side of an earlier cut stay consecutive.
    """
    rank = dict(rank or {})
    L = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    arcs = {}
    for lab, m in h.items():
        rs = _runs_on(cyc, pos, m)
        if len(rs) != 1:
            raise RecursionInvariantError(f"member {lab} is not a single run in the base case")
        arcs[lab] = rs[0]
    kept, succ = _strict_reduce(L, arcs)
    for child, parent in succ.items():
        edges.add((child, parent))
    stats.pendants += len(succ)
    arcs = {lab: arcs[lab] for lab in kept}
    h = {lab: h[lab] for lab in kept}
    best = None
    nk_total = 0
    for idx, k in enumerate(ks):
        rs = _runs_on(cyc, pos, k)
        if len(rs) < 2:
            continue
        nk_total += len(rs) - 1
        for c in _chords(L, rs):
            key = (c[0], idx)
            if best is None or key < best[0]:
                best = (key, c, idx)
    if best is None:
        edges.update(_cycle_edges(_lex_order(L, arcs, rank)))
        return
    stats.splits_k += 1
    _, (_, pu, pv), _ = best
    u0, v0 = cyc[pu], cyc[pv]
    c_r = _arc(cyc, pu, pv)
    c_l = _arc(cyc, pv, pu)
    set_l = set(c_l)
    set_r = set(c_r)
    interior_l = set_l - {u0, v0}
    # members crossing the chord must contain one of its ends
    for lab, m in h.items():
        if m & interior_l and m & (set_r - {u0, v0}) and not ({u0, v0} & m):
            raise RecursionInvariantError(f"member {lab} crosses chord {(u0, v0)} without touching it")
    h_r = {lab: m & set_r for lab, m in h.items() if m & set_r}
    def reach(lab, walk):
        # contiguous stretch of the member entering C_L from one chord end
        n = 0
        for v in walk:
            if v not in h[lab]:
                break
            n += 1
        return n

    h_l = {lab: m for lab, m in h.items() if m <= interior_l}
    rank_r = dict(rank)
    for end, walk, r in ((u0, c_l[::-1], -1), (v0, c_l, 1)):
        group = [lab for lab, m in h.items() if end in m]
        if group:
            top = min(group, key=lambda lab: (-reach(lab, walk), len(h[lab] & set_r), _label_key(lab)))
            h_l[top] = h[top] & set_l
            rank_r[top] = r
    k_l = [k & set_l for k in ks if k & set_l]
    k_r = [k & set_r for k in ks if k & set_r]
    new_total = total_extra_runs(c_l, k_l)
    if new_total >= nk_total:
        raise RecursionInvariantError("K run count did not drop after a split")
    if h_r:
        work.append(("single", c_r, h_r, k_r, rank_r))
    if h_l:
        work.append(("single", c_l, h_l, k_l, rank))


def _solve_general(cyc: list, h: dict, ks: list, edges: set, stats: _Stats, work: list) -> None:
    L = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    h, succ = _containment_reduce(h)
    for child, parent in succ.items():
        edges.add((child, parent))
    stats.pendants += len(succ)
    best = None
    n_h = 0
    for lab, m in h.items():
        rs = _runs_on(cyc, pos, m)
        if len(rs) < 2:
            continue
        n_h += len(rs) - 1
        for c in _chords(L, rs):
            key = (c[0], _label_key(lab))
            if best is None or key < best[0]:
                best = (key, c, lab)
    if best is None:
        work.append(("single", cyc, h, ks, {}))
        return
    stats.splits_h += 1
    _, (_, pu, pv), h0 = best
    u0, v0 = cyc[pu], cyc[pv]
    gap_closed = _arc(cyc, pu, pv)
    gap_open = set(gap_closed) - {u0, v0}
    rest = _arc(cyc, pv, pu)
    if h[h0] & gap_open:
        raise RecursionInvariantError("shortest chord of H0 does not bound an empty gap")
    h_r = {}
    h_l = {}
    closed = set(gap_closed)
    for lab, m in h.items():
        if lab == h0:
            continue
        if m & gap_open:
            # outside the gap such a member must sit inside H0
            if not (m - closed) <= h[h0]:
                raise RecursionInvariantError(f"member {lab} leaves H0 outside the chord gap")
            if not ({u0, v0} & m) and (m - closed):
                raise RecursionInvariantError(f"member {lab} crosses chord {(u0, v0)} without touching it")
            h_r[lab] = m & closed
        else:
            h_l[lab] = m
    h_r[h0] = frozenset(rest)
    # every member spanning the same chord is widened across the gap, not only H0
    for lab, m in h_l.items():
        if u0 in m and v0 in m:
            h_l[lab] = m | closed
    h_l[h0] = h[h0] | closed
    if total_extra_runs(cyc, h_l.values()) >= n_h:
        raise RecursionInvariantError("H run count did not drop after a derived split")
    work.append(("single", cyc, h_r, ks, {}))
    work.append(("general", cyc, h_l, ks, {}))


def _solve(cyc: list, h: dict, ks: list) -> tuple[set, _Stats]:
    edges: set = set()
    stats = _Stats()
    work = [("general", list(cyc), dict(h), list(ks), {})]
    while work:
        kind, c, hh, kk, rk = work.pop()
        if not hh:
            continue
        if kind == "general":
            _solve_general(c, hh, kk, edges, stats, work)
        else:
            _solve_single_h(c, hh, kk, edges, stats, work, rk)
    return edges, stats


# --- public builders -------------------------------------------------------------

def _finish(labels: list, edges: set, kind: str, stats: _Stats, extra: dict | None = None) -> Support:
    sup = Support.from_label_edges(labels, edges)
    g = sup.as_graph()
    order = verify.outerplanar_embedding_order(g)
    if order is None:
        raise RecursionInvariantError("assembled support is not outerplanar")
    emb = tuple(labels[i] for i in order)
    info = {"k_splits": stats.splits_k, "h_splits": stats.splits_h, "pendants": stats.pendants}
    if extra:
        info.update(extra)
    width = max(min_fill_order_width(g), 0)
    return sup.with_provenance(Provenance(kind, width=width, width_bound=2, embedding=emb, extra=info))


def single_run_support(cs: CycleSystem) -> Support:
    for fam in (cs.family_h, cs.k_or_singletons()):
        for i, m in enumerate(fam):
            rd = run_decompose(cs, m)
            if rd.count != 1:
                raise PreconditionError(f"member {fam.family_name}[{i}] is not a single run", {"member": i})
    order = lex_cycle(cs)
    stats = _Stats()
    return _finish(list(range(len(cs.family_h))), _cycle_edges(order), "outerplanar-single-run", stats)


def support_multi_run_k(cs: CycleSystem) -> Support:
    ks = cs.k_or_singletons()
    w = classify_axax(cs, cs.family_h) or classify_axax(cs, ks)
    if w:
        raise PatternError("cycle system is not axax-free", w.to_json())
    cyc = list(range(cs.n))
    h = {i: m for i, m in enumerate(cs.family_h)}
    for i, m in h.items():
        if len(_runs_on(cyc, {v: v for v in cyc}, m)) != 1:
            raise PreconditionError(f"member H[{i}] is not a single run", {"member": i})
    red = _reduce(CycleSystem(cs.n, cs.family_h, ks))
    edges: set = set()
    stats = _Stats()
    work = [("single", list(range(red.n)), red.h, red.k, {})]
    while work:
        _, c, hh, kk, rk = work.pop()
        if hh:
            _solve_single_h(c, hh, kk, edges, stats, work, rk)
    return _finish(list(range(len(cs.family_h))), edges, "outerplanar-multi-run-k", stats)


def outerplanar_intersection_support(cs: CycleSystem, kind: str = "outerplanar-intersection") -> Support:
    w = classify_strong_axax(cs)
    if w:
        raise PatternError(f"cycle system is not strong axax-free ({w.clause})", w.to_json())
    red = _reduce(cs)
    labels = list(range(len(cs.family_h)))
    if red.n == 0 or not red.h:
        return _finish(labels, set(), kind, _Stats(), {"reduced_n": red.n})
    edges, stats = _solve(list(range(red.n)), red.h, red.k)
    return _finish(labels, edges, kind, stats, {"reduced_n": red.n})


def outerplanar_dual_support(cs: CycleSystem) -> Support:
    w = classify_axax(cs, cs.family_h)
    if w:
        raise PatternError("cycle system is not axax-free", w.to_json())
    single = CycleSystem(cs.n, cs.family_h, None)
    return outerplanar_intersection_support(single, kind="outerplanar-dual")


def outerplanar_primal_support(cs: CycleSystem, blue: Iterable[int] | None = None) -> Support:
    """Primal support on the blue cycle vertices via singleton ``H`` members."""
    blue = sorted(range(cs.n) if blue is None else set(blue))
    w = classify_axax(cs, cs.family_h)
    if w:
        raise PatternError("cycle system is not axax-free", w.to_json())
    if not blue:
        return Support((), frozenset(), Provenance("outerplanar-primal", width=0, width_bound=2, embedding=()))
    swapped = CycleSystem.of(cs.n, [{b} for b in blue], list(cs.family_h.members))
    sup = outerplanar_intersection_support(swapped, kind="outerplanar-primal")
    edges = {(blue[a], blue[b]) for a, b in sup.label_edges()}
    emb = tuple(blue[i] for i in sup.provenance.embedding)
    prov = sup.provenance
    return Support.from_label_edges(
        blue, edges, Provenance(prov.kind, prov.width, prov.width_bound, emb, prov.extra)
    )


# --- projection from outerplanar graphs ---------------------------------------------

@dataclass(frozen=True)
class Projection:
    cycle: CycleSystem
    order: tuple


def outer_cycle_order(g: Graph) -> list[int]:
    order = verify.outerplanar_embedding_order(g)
    if order is None:
        raise PreconditionError("host graph is not outerplanar", {"vertices": g.vertex_count})
    return order


def project(g: Graph, hs: SubgraphFamily, ks: SubgraphFamily | None = None) -> Projection:
    """Read members off the outer face of ``g`` as subsets of a cycle."""
    order = outer_cycle_order(g)
    pos = {v: i for i, v in enumerate(order)}
    h2 = [{pos[v] for v in m} for m in hs]
    k2 = None if ks is None else [{pos[v] for v in m} for m in ks]
    return Projection(CycleSystem.of(g.vertex_count, h2, k2), tuple(order))


def outerplanar_graph_intersection_support(system: IntersectionSystem) -> Support:
    proj = project(system.graph, system.family_h, system.family_k)
    return outerplanar_intersection_support(proj.cycle)


def outerplanar_graph_dual_support(system: GraphSystem) -> Support:
    proj = project(system.graph, system.family_h)
    return outerplanar_dual_support(proj.cycle)


def outerplanar_graph_primal_support(system: GraphSystem) -> Support:
    proj = project(system.graph, system.family_h)
    blue = system.coloring.blue()
    pos = {v: i for i, v in enumerate(proj.order)}
    sup = outerplanar_primal_support(proj.cycle, [pos[b] for b in blue])
    back = {i: v for v, i in pos.items()}
    edges = {(back[a], back[b]) for a, b in sup.label_edges()}
    prov = sup.provenance
    emb = tuple(back[x] for x in prov.embedding)
    return Support.from_label_edges(
        sorted(blue), edges, Provenance(prov.kind, prov.width, prov.width_bound, emb, prov.extra)
    )


# --- counterexamples -----------------------------------------------------------------

def asteroidal_cycle_system() -> CycleSystem:
    """Hexagon with three consecutive triples and the alternate triple."""
    return CycleSystem.of(6, [{0, 1, 2}, {2, 3, 4}, {4, 5, 0}, {1, 3, 5}])


def alternating_cycle_system() -> CycleSystem:
    """Seven-cycle where a member alternates with two disjoint ``K`` members."""
    return CycleSystem.of(
        7,
        [{0, 4}, {1}, {2, 3}, {5, 6}],
        [{0, 1}, {1, 2}, {3, 5}, {0, 6}, {1, 6}, {3, 4}],
    )
