"""JSON formats for instances, decompositions and supports, plus DOT export."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cyclesupport import CycleSystem
from .model import (
    Coloring,
    Graph,
    GraphSystem,
    IntersectionSystem,
    Provenance,
    SubgraphFamily,
    Support,
)
from .treedecomp import TreeDecomposition


class InstanceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    """Either a host graph or a bare cycle (``cycle`` = its length) plus families."""

    family_h: SubgraphFamily
    family_k: SubgraphFamily | None = None
    graph: Graph | None = None
    coloring: Coloring | None = None
    cycle: int | None = None

    @property
    def is_cycle(self) -> bool:
        return self.cycle is not None

    def graph_system(self) -> GraphSystem:
        if self.graph is None:
            raise InstanceFormatError("instance has no host graph")
        return GraphSystem(self.graph, self.family_h, self.coloring)

    def intersection_system(self) -> IntersectionSystem:
        if self.graph is None:
            raise InstanceFormatError("instance has no host graph")
        if self.family_k is None:
            raise InstanceFormatError("instance has no K family")
        return IntersectionSystem(self.graph, self.family_h, self.family_k)

    def cycle_system(self) -> CycleSystem:
        if self.cycle is None:
            raise InstanceFormatError("instance is not a cycle system")
        return CycleSystem(self.cycle, self.family_h, self.family_k)


def _members(raw, name: str) -> SubgraphFamily:
    if not isinstance(raw, list) or not all(isinstance(m, list) for m in raw):
        raise InstanceFormatError(f"{name} must be a list of vertex lists")
    try:
        return SubgraphFamily.of([[int(v) for v in m] for m in raw], name)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad {name} family: {exc}") from exc


def instance_from_json(data: dict) -> Instance:
    if not isinstance(data, dict) or "H" not in data:
        raise InstanceFormatError("instance needs an 'H' family")
    hs = _members(data["H"], "H")
    ks = _members(data["K"], "K") if data.get("K") is not None else None
    if "cycle" in data:
        n = data["cycle"]
        if not isinstance(n, int) or n < 1:
            raise InstanceFormatError("'cycle' must be a positive vertex count")
        for fam in (hs, ks):
            for m in fam or ():
                if max(m) >= n or min(m) < 0:
                    raise InstanceFormatError("member vertex outside the cycle")
        return Instance(hs, ks, cycle=n)
    try:
        gd = data["graph"]
        g = Graph.from_edges(int(gd["n"]), [tuple(e) for e in gd.get("edges", [])])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad graph: {exc}") from exc
    for fam in (hs, ks):
        for m in fam or ():
            try:
                g.check_vertices(m)
            except ValueError as exc:
                raise InstanceFormatError(str(exc)) from exc
    coloring = None
    if data.get("coloring") is not None:
        codes = data["coloring"]
        if len(codes) != g.vertex_count or any(c not in ("r", "b") for c in codes):
            raise InstanceFormatError("coloring must list 'r' or 'b' for every vertex")
        coloring = Coloring.from_codes(codes)
    return Instance(hs, ks, g, coloring)


def instance_to_json(inst: Instance) -> dict:
    out: dict = {}
    if inst.is_cycle:
        out["cycle"] = inst.cycle
    else:
        out["graph"] = {"n": inst.graph.vertex_count, "edges": [list(e) for e in sorted(inst.graph.edges)]}
        if inst.coloring is not None:
            out["coloring"] = inst.coloring.codes()
    out["H"] = inst.family_h.sorted_members()
    if inst.family_k is not None:
        out["K"] = inst.family_k.sorted_members()
    return out


def provenance_from_json(data: dict) -> Provenance:
    data = dict(data)
    kind = data.pop("kind")
    width = data.pop("width_achieved", None)
    bound = data.pop("width_bound_claimed", None)
    emb = data.pop("embedding", None)
    return Provenance(kind, width, bound, tuple(emb) if emb is not None else None, data)


def support_to_json(sup: Support) -> dict:
    return {
        "labels": list(sup.labels),
        "edges": [list(e) for e in sorted(sup.edges)],
        "provenance": sup.provenance.to_json(),
    }


def support_from_json(data: dict) -> Support:
    try:
        return Support(
            tuple(data["labels"]),
            frozenset(tuple(e) for e in data["edges"]),
            provenance_from_json(data.get("provenance", {"kind": "unknown"})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"bad support file: {exc}") from exc


def td_from_json(data: dict) -> TreeDecomposition:
    try:
        return TreeDecomposition.from_json(data)
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"bad decomposition file: {exc}") from exc


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path: str | Path, data) -> None:
    text = json.dumps(data, sort_keys=True, indent=1) + "\n"
    if str(path) == "-":
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8")


def to_dot(edges, labels=None, name: str = "G") -> str:
    """DOT text for an undirected graph; ``edges`` hold pairs of node ids."""
    lines = [f"graph {name} {{"]
    for v in labels if labels is not None else sorted({x for e in edges for x in e}):
        lines.append(f'  "{v}";')
    for a, b in sorted(edges):
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def support_dot(sup: Support) -> str:
    return to_dot(sorted(sup.label_edges()), list(sup.labels), "support")


def graph_dot(g: Graph) -> str:
    return to_dot(sorted(g.edges), list(g.vertices), "host")
