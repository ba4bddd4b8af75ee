"""Graphs, colourings, subgraph families and the basic predicates on them.

Every other module in the package works with the immutable value types
defined here.  Vertex ids are always ``0..n-1``; a subgraph is identified with
its vertex set and is always taken to be the induced subgraph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from . import kernels


class SupportError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(SupportError):
    """An input violates the precondition of an operation.

    ``witness`` carries a JSON-friendly description of the violation.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class DisconnectedMemberError(PreconditionError):
    pass


class PiercingFamilyError(PreconditionError):
    pass


class Color(Enum):
    RED = "r"
    BLUE = "b"


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices ``0..vertex_count-1``."""

    vertex_count: int
    edges: frozenset = frozenset()
    adjacency: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {e} has an endpoint out of range")
            norm.add((u, v) if u < v else (v, u))
        adj = [set() for _ in range(self.vertex_count)]
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "adjacency", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset((int(u), int(v)) for u, v in edges))

    @property
    def vertices(self) -> range:
        return range(self.vertex_count)

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.vertex_count, self.edges | {tuple(sorted(e)) for e in extra})

    def induced_edges(self, s: Iterable[int]) -> list[tuple[int, int]]:
        s = set(s)
        return sorted((u, v) for u, v in self.edges if u in s and v in s)

    def check_vertices(self, s: Iterable[int]) -> None:
        for v in s:
            if not (0 <= v < self.vertex_count):
                raise ValueError(f"vertex id {v} out of range for {self.vertex_count} vertices")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows: int, cols: int) -> Graph:
    def vid(i, j):
        return i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j)))
    return Graph.from_edges(rows * cols, edges)


@dataclass(frozen=True)
class Coloring:
    colors: tuple

    @classmethod
    def all_blue(cls, n: int) -> "Coloring":
        return cls(tuple([Color.BLUE] * n))

    @classmethod
    def from_blue(cls, n: int, blue: Iterable[int]) -> "Coloring":
        blue = set(blue)
        return cls(tuple(Color.BLUE if v in blue else Color.RED for v in range(n)))

    @classmethod
    def from_codes(cls, codes: Sequence[str]) -> "Coloring":
        return cls(tuple(Color(c) for c in codes))

    def __len__(self):
        return len(self.colors)

    def is_blue(self, v: int) -> bool:
        return self.colors[v] is Color.BLUE

    def blue(self, s: Iterable[int] | None = None) -> frozenset:
        if s is None:
            s = range(len(self.colors))
        return frozenset(v for v in s if self.colors[v] is Color.BLUE)

    def red(self, s: Iterable[int] | None = None) -> frozenset:
        if s is None:
            s = range(len(self.colors))
        return frozenset(v for v in s if self.colors[v] is Color.RED)

    def codes(self) -> list[str]:
        return [c.value for c in self.colors]


@dataclass(frozen=True)
class SubgraphFamily:
    """Ordered list of nonempty vertex sets.  Identity is positional."""

    members: tuple
    family_name: str = "H"

    def __post_init__(self):
        if self.family_name not in ("H", "K"):
            raise ValueError("family_name must be 'H' or 'K'")
        fixed = []
        for i, m in enumerate(self.members):
            m = frozenset(int(v) for v in m)
            if not m:
                raise ValueError(f"member {i} of family {self.family_name} is empty")
            fixed.append(m)
        object.__setattr__(self, "members", tuple(fixed))

    @classmethod
    def of(cls, members: Iterable[Iterable[int]], name: str = "H") -> "SubgraphFamily":
        return cls(tuple(frozenset(m) for m in members), name)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def containing(self, v: int) -> list[int]:
        return [i for i, m in enumerate(self.members) if v in m]

    def vertex_index(self) -> dict[int, list[int]]:
        """Map each vertex to the (sorted) indices of members containing it."""
        index: dict[int, list[int]] = {}
        for i, m in enumerate(self.members):
            for v in m:
                index.setdefault(v, []).append(i)
        return index

    def sorted_members(self) -> list[list[int]]:
        return [sorted(m) for m in self.members]


def induced_connected(g: Graph, s: Iterable[int]) -> bool:
    """True iff the subgraph of ``g`` induced on ``s`` is connected (empty -> False)."""
    s = frozenset(s)
    g.check_vertices(s)
    return kernels.subset_connected(g.adjacency, s)


def components(g: Graph, s: Iterable[int]) -> list[list[int]]:
    """Connected components of ``g[s]``, each sorted, ordered by smallest vertex."""
    s = set(s)
    seen: set[int] = set()
    out = []
    for start in sorted(s):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if w in s and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def check_members_connected(g: Graph, fam: SubgraphFamily) -> None:
    for i, m in enumerate(fam.members):
        g.check_vertices(m)
        if not kernels.subset_connected(g.adjacency, m):
            raise DisconnectedMemberError(
                f"member {fam.family_name}[{i}] does not induce a connected subgraph",
                {"family": fam.family_name, "member": i, "components": components(g, m)},
            )


def find_piercing_pair(g: Graph, fam: SubgraphFamily) -> tuple[int, int] | None:
    """First ordered pair ``(i, j)`` with ``H_i - H_j`` nonempty and disconnected."""
    check_members_connected(g, fam)
    members = fam.members
    adj = g.adjacency
    index = fam.vertex_index()
    for i, h in enumerate(members):
        # only members meeting h can split it
        touching = sorted({j for v in h for j in index[v] if j != i})
        for j in touching:
            diff = h - members[j]
            if diff and not kernels.subset_connected(adj, diff):
                return (i, j)
    return None


def is_non_piercing(g: Graph, fam: SubgraphFamily) -> bool:
    return find_piercing_pair(g, fam) is None


@dataclass(frozen=True)
class ContainmentReduction:
    """Result of reducing a family to its inclusion-maximal members.

    ``kept`` lists the retained member indices in increasing order and
    ``successor`` maps every dropped index to a retained index whose vertex set
    contains it.
    """

    kept: tuple
    successor: Mapping[int, int]

    def subfamily(self, fam: SubgraphFamily) -> SubgraphFamily:
        return SubgraphFamily(tuple(fam.members[i] for i in self.kept), fam.family_name)


def containment_maximal(fam: SubgraphFamily) -> ContainmentReduction:
    members = fam.members
    order = sorted(range(len(members)), key=lambda i: (-len(members[i]), i))
    kept: list[int] = []
    successor: dict[int, int] = {}
    for i in order:
        containers = [k for k in kept if members[i] <= members[k]]
        if containers:
            successor[i] = min(containers)
        else:
            kept.append(i)
    # a removed member may have a lower-index container among the kept ones that
    # was discovered later in the size order; min() above already handles it
    return ContainmentReduction(tuple(sorted(kept)), successor)


@dataclass(frozen=True)
class Provenance:
    kind: str
    width: int | None = None
    width_bound: int | None = None
    embedding: tuple | None = None
    extra: Mapping = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "width_bound_claimed": self.width_bound,
            "width_achieved": self.width,
        }
        if self.embedding is not None:
            out["embedding"] = list(self.embedding)
        if self.extra:
            out.update(self.extra)
        return out


@dataclass(frozen=True)
class Support:
    """A support graph.  ``edges`` hold pairs of positions into ``labels``."""

    labels: tuple
    edges: frozenset
    provenance: Provenance = Provenance("unknown")

    def __post_init__(self):
        k = len(self.labels)
        if len(set(self.labels)) != k:
            raise ValueError("support labels must be distinct")
        norm = set()
        for i, j in self.edges:
            if i == j or not (0 <= i < k and 0 <= j < k):
                raise ValueError(f"bad support edge {(i, j)}")
            norm.add((i, j) if i < j else (j, i))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_label_edges(cls, labels, label_edges, provenance: Provenance | None = None) -> "Support":
        labels = tuple(labels)
        pos = {lab: i for i, lab in enumerate(labels)}
        edges = {(pos[a], pos[b]) for a, b in label_edges if a != b}
        return cls(labels, frozenset(edges), provenance or Provenance("unknown"))

    def label_edges(self) -> set[tuple]:
        return {(self.labels[i], self.labels[j]) for i, j in self.edges}

    def has_label_edge(self, a, b) -> bool:
        pos = {lab: i for i, lab in enumerate(self.labels)}
        i, j = pos[a], pos[b]
        return (min(i, j), max(i, j)) in self.edges

    def as_graph(self) -> Graph:
        return Graph(len(self.labels), self.edges)

    def with_provenance(self, provenance: Provenance) -> "Support":
        return Support(self.labels, self.edges, provenance)


def attach_pendants(support: Support, successor: Mapping[int, int]) -> Support:
    """Add each dropped member as a degree-one label hanging off its successor.

    The resulting labels are sorted so that member indices stay in order.
    """
    labels = set(support.labels)
    for child, parent in successor.items():
        if parent not in labels:
            raise PreconditionError(
                f"successor {parent} of member {child} is not a support label",
                {"member": child, "successor": parent},
            )
        if child in labels:
            raise PreconditionError(f"member {child} is already a support label", {"member": child})
    new_labels = sorted(labels | set(successor))
    edges = support.label_edges() | {(c, p) for c, p in successor.items()}
    return Support.from_label_edges(new_labels, edges, support.provenance)


@dataclass(frozen=True)
class GraphSystem:
    graph: Graph
    family_h: SubgraphFamily
    coloring: Coloring | None = None

    def __post_init__(self):
        if self.coloring is None:
            object.__setattr__(self, "coloring", Coloring.all_blue(self.graph.vertex_count))
        if len(self.coloring) != self.graph.vertex_count:
            raise ValueError("coloring must cover exactly the vertex set")
        check_members_connected(self.graph, self.family_h)

    @property
    def blue_vertices(self) -> frozenset:
        return self.coloring.blue()


@dataclass(frozen=True)
class IntersectionSystem:
    graph: Graph
    family_h: SubgraphFamily
    family_k: SubgraphFamily

    def __post_init__(self):
        check_members_connected(self.graph, self.family_h)
        check_members_connected(self.graph, self.family_k)

    def h_system(self) -> GraphSystem:
        return GraphSystem(self.graph, self.family_h)
