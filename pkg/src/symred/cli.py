"""Command-line tool: parse inputs, run the search, emit solver-ready
output.

Usage shapes:

    symred INPUT.cnf [--graph G] [--prefix F | --prefix-vars LIST] [...]
    symred gen (tensor|ccp|ramsey|a000088) [family params] [--out BASE]
    symred oracle INPUT.cnf [same flags as a run]

File formats are line-based and 1-indexed like DIMACS: see parse_dimacs
and parse_graph.  Exit codes: 0 success, 1 input error, 2 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys

from . import gen as genmod
from .canon import ColoredGraph, EncodingError, GraphError
from .core import (Assignment, PlanError, SearchInvariantError, SearchStats,
                   build_prefix_plan, run_sequential)
from .dist import HIERARCHICAL, MASTER, StackPolicy, run_parallel
from .encode import (GLOBAL_VALUES, PER_VARIABLE_VALUES, Cnf, CnfError,
                     cnf_to_model, load_aux_model)
from .oracle import OracleCapExceeded, exact_cover_check, orbit_count_exhaustive


class ParseError(ValueError):
    """Malformed input file; message carries the line number."""


# ---------------------------------------------------------------------------
# Parsers


def parse_dimacs(data: bytes) -> Cnf:
    """DIMACS CNF: 'c' comments, one 'p cnf V C' header, 0-terminated
    clauses of nonzero literals (clauses may span lines)."""
    num_vars = None
    num_clauses = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for ln, raw in enumerate(data.decode("utf-8", "replace").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if (num_vars is not None or len(parts) != 4
                    or parts[1] != "cnf"):
                raise ParseError(f"line {ln}: malformed header {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: malformed header {line!r}")
            if num_vars < 0 or num_clauses < 0:
                raise ParseError(f"line {ln}: negative header counts")
            continue
        if num_vars is None:
            raise ParseError(f"line {ln}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"line {ln}: bad literal {tok!r}")
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise ParseError(
                        f"line {ln}: literal {lit} out of range "
                        f"(num_vars={num_vars})")
                current.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        raise ParseError("last clause not 0-terminated")
    if len(clauses) != num_clauses:
        raise ParseError(f"header promises {num_clauses} clauses, "
                         f"found {len(clauses)}")
    return Cnf.make(num_vars, clauses)


def emit_dimacs(cnf: Cnf) -> bytes:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for clause in cnf.clauses:
        lines.append(" ".join(map(str, clause)) + " 0")
    return ("\n".join(lines) + "\n").encode()


def parse_graph(data: bytes) -> ColoredGraph:
    """Colored graph: 'p edge V E' header, 'n VERTEX COLOR' color lines,
    'e U V' edge lines; vertices 1-based, default color 0, order-free."""
    n = None
    num_edges = None
    colors: list[int] = []
    edges: list[tuple[int, int]] = []
    seen = set()
    for ln, raw in enumerate(data.decode("utf-8", "replace").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"line {ln}: malformed header {line!r}")
            try:
                n, num_edges = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {ln}: malformed header {line!r}")
            colors = [0] * n
            continue
        if n is None:
            raise ParseError(f"line {ln}: data before 'p edge' header")
        if parts[0] == "n":
            if len(parts) != 3:
                raise ParseError(f"line {ln}: malformed color line")
            v, c = int(parts[1]), int(parts[2])
            if not 1 <= v <= n:
                raise ParseError(f"line {ln}: vertex {v} out of range")
            colors[v - 1] = c
        elif parts[0] == "e":
            if len(parts) != 3:
                raise ParseError(f"line {ln}: malformed edge line")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"line {ln}: edge ({u},{v}) out of range")
            if u == v:
                raise ParseError(f"line {ln}: loop at {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(f"line {ln}: duplicate edge ({u},{v})")
            seen.add(key)
            edges.append((u - 1, v - 1))
        else:
            raise ParseError(f"line {ln}: unknown line type {parts[0]!r}")
    if n is None:
        raise ParseError("missing 'p edge' header")
    if len(edges) != num_edges:
        raise ParseError(f"header promises {num_edges} edges, "
                         f"found {len(edges)}")
    return ColoredGraph(n, colors, edges)


def emit_graph(g: ColoredGraph) -> bytes:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    for v, c in enumerate(g.colors):
        if c != 0:
            lines.append(f"n {v + 1} {c}")
    for u, v in sorted(g.edges):
        lines.append(f"e {u + 1} {v + 1}")
    return ("\n".join(lines) + "\n").encode()


def parse_prefix(data: bytes, num_vars: int) -> tuple[int, ...]:
    """Whitespace-separated 1-based variable indices."""
    out = []
    for tok in data.decode("utf-8", "replace").split():
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(f"bad prefix entry {tok!r}")
        if not 1 <= v <= num_vars:
            raise ParseError(f"prefix variable {v} out of range "
                             f"1..{num_vars}")
        out.append(v - 1)
    if len(set(out)) != len(out):
        raise ParseError("prefix variables must be distinct")
    return tuple(out)


def emit_prefix(prefix) -> bytes:
    return (" ".join(str(u + 1) for u in prefix) + "\n").encode()


# ---------------------------------------------------------------------------
# Output emitters


def _cube_lits(a: Assignment) -> list[int]:
    return [(u + 1) if r else -(u + 1) for u, r in a.items]


def emit_outputs(assignments: list[Assignment], fmt: str,
                 cnf: Cnf | None = None) -> bytes:
    """Render the run result.

    cubes: one 'a <lits> 0' line per assignment.  icnf: 'p inccnf', the
    original clauses, then the cube lines.  sbp: the original CNF plus a
    fresh selector variable per cube, clauses tying each selector to its
    cube's literals, and one clause requiring some selector.  count: the
    number of assignments.
    """
    if fmt == "count":
        return f"{len(assignments)}\n".encode()
    if fmt == "cubes":
        lines = ["a " + " ".join(map(str, _cube_lits(a))) + " 0"
                 for a in assignments]
        return ("\n".join(lines) + "\n").encode() if lines else b""
    if cnf is None:
        raise ValueError(f"format {fmt!r} needs the original CNF")
    if fmt == "icnf":
        lines = ["p inccnf"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in cnf.clauses]
        lines += ["a " + " ".join(map(str, _cube_lits(a))) + " 0"
                  for a in assignments]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "sbp":
        nsel = len(assignments)
        sel = [cnf.num_vars + i + 1 for i in range(nsel)]
        out = [list(cl) for cl in cnf.clauses]
        for s, a in zip(sel, assignments):
            for lit in _cube_lits(a):
                out.append([-s, lit])
        out.append(sel)
        lines = [f"p cnf {cnf.num_vars + nsel} {len(out)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in out]
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# Orchestration


def _build_model(args):
    with open(args.input, "rb") as fh:
        cnf = parse_dimacs(fh.read())
    mode = GLOBAL_VALUES if args.value_mode == "global" else \
        PER_VARIABLE_VALUES
    if args.graph:
        with open(args.graph, "rb") as fh:
            aux = parse_graph(fh.read())
        model = load_aux_model(aux, cnf.num_vars, mode)
    else:
        model = cnf_to_model(cnf, mode)
    return cnf, model


def _resolve_prefix(args, cnf) -> tuple[int, ...]:
    if args.prefix and args.prefix_vars:
        raise ParseError("--prefix and --prefix-vars are exclusive")
    if args.prefix:
        with open(args.prefix, "rb") as fh:
            prefix = parse_prefix(fh.read(), cnf.num_vars)
    elif args.prefix_vars:
        prefix = parse_prefix(args.prefix_vars.replace(",", " ").encode(),
                              cnf.num_vars)
    else:
        raise ParseError("a prefix is required (--prefix or --prefix-vars)")
    if args.depth is not None:
        if not 0 <= args.depth <= len(prefix):
            raise ParseError(f"--depth must be in 0..{len(prefix)}")
        prefix = prefix[:args.depth]
    return prefix


def _print_stats(stats: SearchStats, stream) -> None:
    for level, count in enumerate(stats.accepted):
        if level == 0:
            continue
        print(f"{level}\t{count}", file=stream)


def _run_command(args) -> int:
    cnf, model = _build_model(args)
    prefix = _resolve_prefix(args, cnf)
    plan = build_prefix_plan(model, prefix)
    stats = SearchStats.for_depth(plan.k)
    if args.workers == 1 and args.stack == MASTER:
        result = sorted(run_sequential(model, plan, stats),
                        key=lambda a: a.items)
    else:
        policy = StackPolicy(mode=args.stack, threshold=args.hier_threshold)
        from .dist import RunStatistics
        rstats = RunStatistics()
        result = run_parallel(model, plan, workers=args.workers,
                              policy=policy, stats_out=rstats)
        stats = rstats.search
    sys.stdout.buffer.write(emit_outputs(result, args.output, cnf))
    sys.stdout.buffer.flush()
    if args.stats:
        _print_stats(stats, sys.stderr)
    return 0


def _oracle_command(args) -> int:
    cnf, model = _build_model(args)
    prefix = _resolve_prefix(args, cnf)
    count = orbit_count_exhaustive(model, prefix)
    print(f"oracle orbit count: {count}")
    plan = build_prefix_plan(model, prefix)
    result = run_sequential(model, plan)
    print(f"engine count: {len(result)}")
    report = exact_cover_check(result, model, prefix)
    print(f"exact cover: {'PASS' if report.ok else 'FAIL'}")
    for x in report.missed_orbits:
        print(f"  missed orbit, e.g. {x.items}")
    for x in report.duplicate_hits:
        print(f"  duplicate hit {x.items}")
    for x in report.unknown:
        print(f"  emitted outside all orbits {x.items}")
    return 0 if report.ok else 2


def _gen_command(args) -> int:
    if args.family == "tensor":
        inst = genmod.gen_tensor(args.m, args.r, args.ones, args.seed)
        base = args.out or f"t{args.m}x{args.r}_{args.ones}_{args.seed}"
    elif args.family == "ccp":
        inst = genmod.gen_ccp(args.n, args.s, args.t)
        base = args.out or f"ccp{args.n}_{args.s}_{args.t}"
    elif args.family == "ramsey":
        inst = genmod.gen_ramsey(args.n, args.k)
        base = args.out or f"ramsey{args.n}_{args.k}"
    else:
        inst = genmod.gen_a000088(args.n)
        base = args.out or f"a{args.n}"
    with open(base + ".cnf", "wb") as fh:
        fh.write(emit_dimacs(inst.cnf))
    written = [base + ".cnf"]
    if inst.aux is not None:
        with open(base + ".graph", "wb") as fh:
            fh.write(emit_graph(inst.aux))
        written.append(base + ".graph")
    with open(base + ".prefix", "wb") as fh:
        fh.write(emit_prefix(inst.prefix))
    written.append(base + ".prefix")
    print("wrote " + " ".join(written))
    return 0


def _add_run_flags(p):
    p.add_argument("input", help="CNF file (DIMACS)")
    p.add_argument("--graph", help="auxiliary colored-graph file")
    p.add_argument("--prefix", help="prefix file (1-based variable indices)")
    p.add_argument("--prefix-vars",
                   help="inline prefix, e.g. '1,2,3' or '1 2 3'")
    p.add_argument("--depth", type=int, default=None,
                   help="truncate the prefix to this many levels")
    p.add_argument("--value-mode", choices=["global", "phase"],
                   default="global")


def build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="symred",
        description="Enumerate nonisomorphic prefix assignments of a "
                    "constraint system and emit cubes, an incremental CNF, "
                    "or a symmetry-breaking predicate.")
    sub = ap.add_subparsers(dest="command")

    run = sub.add_parser("run", help="run the symmetry reduction (default)")
    _add_run_flags(run)
    run.add_argument("--output", choices=["cubes", "icnf", "sbp", "count"],
                     default="cubes")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--stack", choices=[MASTER, HIERARCHICAL],
                     default=MASTER)
    run.add_argument("--hier-threshold", type=int, default=1)
    run.add_argument("--stats", action="store_true",
                     help="per-level accepted counts on stderr")

    orc = sub.add_parser("oracle",
                         help="brute-force orbit count and exact-cover check")
    _add_run_flags(orc)

    g = sub.add_parser("gen", help="generate benchmark instances")
    gsub = g.add_subparsers(dest="family", required=True)
    t = gsub.add_parser("tensor")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--ones", type=int, required=True)
    t.add_argument("--seed", type=int, default=0)
    c = gsub.add_parser("ccp")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    r = gsub.add_parser("ramsey")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, default=4)
    a = gsub.add_parser("a000088")
    a.add_argument("--n", type=int, required=True)
    for fam in (t, c, r, a):
        fam.add_argument("--out", help="output file base name")
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # The bare form 'symred input.cnf ...' is the run subcommand.
    if argv and argv[0] not in ("run", "oracle", "gen", "-h", "--help"):
        argv.insert(0, "run")
    ap = build_argparser()
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_help()
        return 1
    try:
        if args.command == "run":
            return _run_command(args)
        if args.command == "oracle":
            return _oracle_command(args)
        return _gen_command(args)
    except (ParseError, CnfError, GraphError, EncodingError, PlanError,
            OracleCapExceeded, OSError, genmod.GenError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SearchInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
