"""Command-line interface: build, gen, check, verify and sweep."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import cyclesupport as cyc
from . import generators as gen
from . import verify
from .dual import dual_support, sparse_width_bound
from .intersection import intersection_support, intersection_width_bound, is_k_easy
from .dual import star_dual_example
from .model import GraphSystem, PreconditionError, SupportError, find_piercing_pair
from .primal import build_primal_support, easy_width_bound, is_easy, star_example
from .serialize import (
    Instance,
    InstanceFormatError,
    graph_dot,
    instance_from_json,
    instance_to_json,
    read_json,
    support_dot,
    support_from_json,
    support_to_json,
    td_from_json,
    write_json,
)
from .treedecomp import DecompositionMode, TooLargeError, build_decomposition

log = logging.getLogger("npsupport")

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_ORACLE = 0, 2, 3, 4

KINDS = [
    "primal",
    "dual",
    "intersection",
    "outerplanar-primal",
    "outerplanar-dual",
    "outerplanar-intersection",
]
PROPERTIES = ["nonpiercing", "axax", "abab", "strong-axax", "k-easy", "easy", "outerplanar", "exact-treewidth"]
FAMILIES = [
    "clique-random",
    "clique-intersection",
    "nonpiercing",
    "nonpiercing-intersection",
    "outerplanar-random",
    "primal-lb",
    "dual-lb",
    "star-primal",
    "star-dual",
    "asteroidal",
    "alternating",
]
CSV_COLUMNS = ["kind", "t", "n", "|H|", "|K|", "width_achieved", "width_bound", "oracle_pass", "wall_ms"]


class InputError(Exception):
    pass


class OracleFailure(Exception):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _witness_line(kind: str, message: str, witness) -> str:
    return json.dumps({"error": kind, "message": message, "witness": witness}, sort_keys=True, default=str)


# --- shared helpers -------------------------------------------------------------

def _load_instance(path: str) -> Instance:
    return instance_from_json(read_json(path))


def _decomposition(inst: Instance, td_path: str | None, mode: str):
    g = inst.graph
    if td_path:
        td = td_from_json(read_json(td_path))
        return build_decomposition(g, DecompositionMode.PROVIDED, provided=td)
    return build_decomposition(g, DecompositionMode(mode)).rooted()


def build_support(inst: Instance, kind: str, td=None, push: bool | None = None):
    """Dispatch one construction; ``td`` is only used by the bounded-treewidth kinds."""
    if kind.startswith("outerplanar-"):
        if inst.is_cycle:
            cs = inst.cycle_system()
            if kind == "outerplanar-intersection":
                return cyc.outerplanar_intersection_support(cs)
            if kind == "outerplanar-dual":
                return cyc.outerplanar_dual_support(cs)
            return cyc.outerplanar_primal_support(cs)
        if kind == "outerplanar-intersection":
            return cyc.outerplanar_graph_intersection_support(inst.intersection_system())
        if kind == "outerplanar-dual":
            return cyc.outerplanar_graph_dual_support(inst.graph_system())
        return cyc.outerplanar_graph_primal_support(inst.graph_system())
    if inst.is_cycle:
        raise InputError(f"kind {kind} needs a host graph, not a cycle system")
    if kind == "primal":
        return build_primal_support(inst.graph_system(), td)
    if kind == "dual":
        return dual_support(inst.graph_system(), td, push=push)
    return intersection_support(inst.intersection_system(), td, push=push)


def _oracle_system(inst: Instance, kind: str):
    if inst.is_cycle:
        return inst.cycle_system()
    if kind.endswith("intersection"):
        return inst.intersection_system()
    return inst.graph_system()


def run_oracle(inst: Instance, kind: str, sup) -> verify.OracleReport:
    rep = verify.check_support(kind, _oracle_system(inst, kind), sup)
    if rep and kind.startswith("outerplanar-"):
        if not verify.is_outerplanar(sup.as_graph()):
            return verify.OracleReport(False, None, "support is not outerplanar")
        emb = sup.provenance.embedding
        if emb is not None and not verify.noncrossing_order(list(emb), sup.label_edges()):
            return verify.OracleReport(False, None, "recorded embedding has crossing edges")
    return rep


# --- commands ---------------------------------------------------------------------

def cmd_build(args) -> int:
    inst = _load_instance(args.input)
    td = None
    if not args.kind.startswith("outerplanar-"):
        if inst.is_cycle:
            raise InputError(f"kind {args.kind} needs a host graph, not a cycle system")
        td = _decomposition(inst, args.td, args.td_mode)
        if args.td_out:
            write_json(args.td_out, td.to_json())
    push = {"auto": None, "always": True, "never": False}[args.push]
    sup = build_support(inst, args.kind, td, push)
    write_json(args.output, support_to_json(sup))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(support_dot(sup))
    if args.verify:
        rep = run_oracle(inst, args.kind, sup)
        if not rep:
            raise OracleFailure(rep.detail, rep.to_json())
    return EXIT_OK


def _generate(args) -> tuple[Instance, object]:
    f = args.family
    td = None
    if f in ("clique-random", "clique-intersection", "nonpiercing", "nonpiercing-intersection"):
        if args.n < args.t + 1:
            raise InputError("need n >= t + 1")
        m = args.members if args.members is not None else args.n
        mk = args.k_members if args.k_members is not None else m
        if f == "clique-random":
            g = gen.gen_clique_system(args.t, args.n, m, args.seed)
        elif f == "clique-intersection":
            g = gen.gen_clique_intersection_system(args.t, args.n, m, mk, args.seed)
        elif f == "nonpiercing":
            g = gen.gen_nonpiercing_system(args.t, args.n, m, args.seed, args.max_size)
        else:
            g = gen.gen_nonpiercing_intersection_system(args.t, args.n, m, mk, args.seed, args.max_size)
        return Instance(g.family_h, g.family_k, g.graph, g.coloring), g.decomposition
    if f == "outerplanar-random":
        m = args.members if args.members is not None else 10
        mk = args.k_members if args.k_members is not None else m
        g = gen.gen_outerplanar_system(args.n, m, mk, args.seed, args.max_size)
        return Instance(g.family_h, g.family_k, g.graph), td
    if f in ("primal-lb", "dual-lb"):
        if args.m < 2:
            raise InputError("--m must be at least 2")
        lb = gen.gen_primal_lb(args.m) if f == "primal-lb" else gen.gen_dual_lb(args.m)
        s = lb.system
        return Instance(s.family_h, None, s.graph, s.coloring), td
    if f in ("star-primal", "star-dual"):
        if args.n < 1:
            raise InputError("--n must be positive")
        s, td = star_example(args.n) if f == "star-primal" else star_dual_example(args.n)
        return Instance(s.family_h, None, s.graph, s.coloring), td
    cs = cyc.asteroidal_cycle_system() if f == "asteroidal" else cyc.alternating_cycle_system()
    return Instance(cs.family_h, cs.family_k, cycle=cs.n), td


def cmd_gen(args) -> int:
    if args.n is not None and args.n < 1:
        raise InputError("--n must be positive")
    if args.t < 0:
        raise InputError("--t must be non-negative")
    inst, td = _generate(args)
    write_json(args.output, instance_to_json(inst))
    if args.td_out:
        if td is None:
            raise InputError(f"family {args.family} comes without a decomposition")
        write_json(args.td_out, td.to_json())
    if args.dot and inst.graph is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(graph_dot(inst.graph))
    return EXIT_OK


def _pattern_target(inst: Instance) -> cyc.CycleSystem:
    if inst.is_cycle:
        return inst.cycle_system()
    return cyc.project(inst.graph, inst.family_h, inst.family_k).cycle


def _check(inst: Instance, prop: str, args) -> tuple[bool, object]:
    if prop == "nonpiercing":
        if inst.is_cycle:
            raise InputError("non-piercing is defined for graph instances")
        for fam in (inst.family_h, inst.family_k):
            if fam is None:
                continue
            GraphSystem(inst.graph, fam)  # connectivity check
            pair = find_piercing_pair(inst.graph, fam)
            if pair is not None:
                return False, {"family": fam.family_name, "pair": list(pair)}
        return True, None
    if prop in ("axax", "abab", "strong-axax"):
        cs = _pattern_target(inst)
        if prop == "axax":
            w = cyc.classify_axax(cs) or (cs.family_k is not None and cyc.classify_axax(cs, cs.family_k)) or None
        elif prop == "abab":
            w = cyc.classify_abab(cs)
        else:
            w = cyc.classify_strong_axax(cs)
        return w is None, (w.to_json() if w else None)
    if inst.is_cycle:
        raise InputError(f"property {prop} needs a host graph")
    if prop == "outerplanar":
        return verify.is_outerplanar(inst.graph), None
    if prop == "exact-treewidth":
        tw = verify.exact_treewidth(inst.graph, args.limit)
        print(json.dumps({"exact_treewidth": tw}))
        return True, None
    td = _decomposition(inst, args.td, args.td_mode)
    if prop == "easy":
        rep = is_easy(inst.graph_system(), td)
        return rep.easy, None if rep else {"member": rep.member, "edge": list(rep.edge), "adhesion": sorted(rep.adhesion)}
    rep = is_k_easy(inst.intersection_system(), td, strict=args.strict)
    return rep.easy, None if rep else rep.to_json()


def cmd_check(args) -> int:
    inst = _load_instance(args.input)
    try:
        ok, witness = _check(inst, args.property, args)
    except TooLargeError as exc:
        raise InputError(str(exc)) from exc
    print(json.dumps({"property": args.property, "holds": ok}))
    if not ok:
        print(_witness_line("property", f"{args.property} does not hold", witness), file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.input)
    sup = support_from_json(read_json(args.support))
    try:
        rep = run_oracle(inst, args.kind, sup)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    print(json.dumps({"kind": args.kind, "ok": rep.ok}))
    if not rep:
        raise OracleFailure(rep.detail, rep.to_json())
    return EXIT_OK


# --- sweep --------------------------------------------------------------------------

def _bound(kind: str, t: int) -> int:
    if kind.startswith("outerplanar-"):
        return 2
    if kind == "primal":
        return easy_width_bound(t)
    if kind == "dual":
        return sparse_width_bound(t)
    return intersection_width_bound(t)


def run_cell(cell: tuple) -> dict:
    """One sweep row; ``cell`` = (kind, family, t, n, members, k_members, seed, push)."""
    kind, family, t, n, m, mk, seed, push = cell
    if kind.startswith("outerplanar-"):
        g = gen.gen_outerplanar_system(n, m, mk, seed)
        inst = Instance(g.family_h, g.family_k, g.graph)
        td = None
        t_in = 2
    else:
        if family == "clique":
            g = gen.gen_clique_intersection_system(t, n, m, mk, seed)
        else:
            g = gen.gen_nonpiercing_intersection_system(t, n, m, mk, seed)
        inst = Instance(g.family_h, g.family_k if kind == "intersection" else None, g.graph, g.coloring)
        td = g.decomposition
        t_in = td.width
    start = time.perf_counter()
    sup = build_support(inst, kind, td, push)
    wall = (time.perf_counter() - start) * 1000.0
    rep = run_oracle(inst, kind, sup)
    return {
        "kind": kind,
        "t": t_in,
        "n": n,
        "|H|": len(inst.family_h),
        "|K|": len(inst.family_k) if inst.family_k is not None else 0,
        "width_achieved": sup.provenance.width,
        "width_bound": _bound(kind, t_in),
        "oracle_pass": bool(rep.ok),
        "wall_ms": round(wall, 3),
        "_seed": seed,
    }


def sweep_cells(args) -> list[tuple]:
    push = {"auto": None, "always": True, "never": False}[args.push]
    cells = []
    for kind in args.kind:
        ts = [2] if kind.startswith("outerplanar-") else args.t
        for t in ts:
            for seed in range(args.seed_start, args.seed_start + args.seeds):
                m = args.members if args.members is not None else args.n
                mk = args.k_members if args.k_members is not None else m
                cells.append((kind, args.family, t, args.n, m, mk, seed, push))
    return cells


def cmd_sweep(args) -> int:
    if args.n < 3 or args.seeds < 1:
        raise InputError("sweep needs n >= 3 and at least one seed")
    cells = sweep_cells(args)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run_cell, cells))
    else:
        rows = [run_cell(c) for c in cells]
    rows.sort(key=lambda r: (r["kind"], r["t"], r["_seed"]))
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="", encoding="utf-8")
    try:
        writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    bad = [r for r in rows if not r["oracle_pass"] or r["width_achieved"] > r["width_bound"]]
    summary = {"rows": len(rows), "failures": len(bad), "max_width": max((r["width_achieved"] for r in rows), default=None)}
    print(json.dumps(summary), file=sys.stderr)
    if bad:
        raise OracleFailure(f"{len(bad)} sweep rows failed", [(r["kind"], r["t"], r["_seed"]) for r in bad[:10]])
    return EXIT_OK


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="npsupport", description="Sparse supports for non-piercing families.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def td_opts(sp):
        sp.add_argument("--td", help="decomposition JSON to use instead of building one")
        sp.add_argument("--td-mode", choices=["min-fill", "exact"], default="min-fill")

    b = sub.add_parser("build", help="construct a support")
    b.add_argument("--kind", choices=KINDS, required=True)
    b.add_argument("--input", required=True)
    b.add_argument("--output", default="-")
    td_opts(b)
    b.add_argument("--td-out", help="write the decomposition that was used")
    b.add_argument("--verify", action="store_true", help="run the matching oracle")
    b.add_argument("--dot", help="also write the support as DOT")
    b.add_argument("--push", choices=["auto", "always", "never"], default="auto")
    b.set_defaults(func=cmd_build)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--m", type=int, default=4, help="lower-bound parameter")
    g.add_argument("--members", type=int)
    g.add_argument("--k-members", type=int)
    g.add_argument("--max-size", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", default="-")
    g.add_argument("--td-out")
    g.add_argument("--dot")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="test a structural property")
    c.add_argument("--property", choices=PROPERTIES, required=True)
    c.add_argument("--input", required=True)
    td_opts(c)
    c.add_argument("--strict", action="store_true", help="strict form of k-easy")
    c.add_argument("--limit", type=int, default=20, help="vertex cap for exact-treewidth")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="check a support file against an instance")
    v.add_argument("--kind", choices=KINDS, required=True)
    v.add_argument("--input", required=True)
    v.add_argument("--support", required=True)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="seeded batch runs to CSV")
    s.add_argument("--kind", choices=KINDS, nargs="+", required=True)
    s.add_argument("--t", type=int, nargs="+", default=[2])
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--members", type=int)
    s.add_argument("--k-members", type=int)
    s.add_argument("--family", choices=["clique", "nonpiercing"], default="clique")
    s.add_argument("--seeds", type=int, default=10)
    s.add_argument("--seed-start", type=int, default=0)
    s.add_argument("--push", choices=["auto", "always", "never"], default="auto")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--output", default="-")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, InstanceFormatError, TooLargeError) as exc:
        print(_witness_line("input", str(exc), None), file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(_witness_line(type(exc).__name__, str(exc), exc.witness), file=sys.stderr)
        return EXIT_PRECONDITION
    except OracleFailure as exc:
        print(_witness_line("oracle", str(exc), exc.witness), file=sys.stderr)
        return EXIT_ORACLE
    except SupportError as exc:
        print(_witness_line(type(exc).__name__, str(exc), None), file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    raise SystemExit(main())
