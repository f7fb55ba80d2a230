"""Command-line front end.

Exit codes: 0 success, 1 usage or input error (or a failed verify), 2 the
search stopped at its budget before proving a value.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .colours import ColourError
from .engine import AllocationSchedule, EngineError, run
from .graphs import (
    BaseGraph,
    BudgetError,
    FamilySpec,
    GraphError,
    Orientation,
    build_family,
    describe,
    load_graph,
)
from .solvers import (
    INF,
    MODES,
    ArgumentError,
    Budget,
    brush_number,
    closed_form_tau,
    erika_residency_report,
    tau,
)
from .solvers.tau import DEFAULT_MODE
from .verify import DEFAULT_ORACLE_RANGE, DEFAULT_SEED, report_json, report_table, run_verify

EXIT_OK, EXIT_INPUT, EXIT_PARTIAL = 0, 1, 2

INPUT_ERRORS = (GraphError, EngineError, ColourError, ArgumentError, BudgetError, OSError, ValueError)


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _source_args(p: argparse.ArgumentParser, required: bool = True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--family", help='family spec such as "friendship:4" or "joost:7,3"')
    src.add_argument("--graph", type=Path, help="edge-list file (u v per line) or JSON {n, edges}")


def _common(p: argparse.ArgumentParser, formats=("text", "json", "dot")):
    p.add_argument("--format", choices=formats, default="text")
    p.add_argument("--out", type=Path, help="also write the machine-readable JSON here")


def _search_args(p: argparse.ArgumentParser, eps: int = 12):
    p.add_argument("--budget-eps", type=int, default=eps,
                   help="refuse orientation spaces larger than 2^N candidates (default %(default)s)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes over orientations")
    p.add_argument("--time-limit", type=float, default=None, help="seconds before giving up")
    p.add_argument("--max-nodes", type=int, default=2_000_000, help="search-node budget")


def build_parser() -> argparse.ArgumentParser:
    parser = Parser(prog="tattoo", description="Tattoo numbers, brush numbers and tattooing traces.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=Parser)

    p = sub.add_parser("tau", help="tattoo number of a graph, with an optimal witness")
    _source_args(p)
    _search_args(p)
    p.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    p.add_argument("--no-symmetry", action="store_true", help="search every orientation")
    _common(p)

    p = sub.add_parser("brush", help="brush number of a graph")
    _source_args(p)
    p.add_argument("--budget-eps", type=int, default=16)
    _common(p)

    p = sub.add_parser("simulate", help="run one tattooing from a schedule file")
    _source_args(p)
    p.add_argument("--schedule", type=Path, required=True,
                   help='JSON: [{"step": t, "vertex": v, "colours": [1, 2]}, ...] or {"v": [1, 2]}')
    p.add_argument("--orientation", default="0",
                   help='arc list "0>1,1>2" or an integer of reversed-edge bits (default 0)')
    _common(p)

    p = sub.add_parser("family", help="closed-form value of a named family next to the search")
    p.add_argument("--family", required=True)
    _search_args(p, eps=16)
    p.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    _common(p, formats=("text", "json"))

    p = sub.add_parser("verify", help="family tables, cross-solver bounds and formula checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--oracle-range", type=int, default=DEFAULT_ORACLE_RANGE)
    p.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    p.add_argument("--jobs", type=int, default=1)
    _common(p, formats=("text", "json"))

    p = sub.add_parser("erika", help="where colour-brushes rest after optimal tattooings of a tree")
    _source_args(p)
    _search_args(p)
    p.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    _common(p, formats=("text", "json"))
    return parser


def load_source(args) -> BaseGraph:
    if getattr(args, "family", None):
        return build_family(FamilySpec.parse(args.family))
    return load_graph(args.graph)


def parse_orientation(g: BaseGraph, text: str) -> Orientation:
    text = text.strip()
    if text.lstrip("-").isdigit():
        bits = int(text)
        if not 0 <= bits < (1 << g.size):
            raise GraphError(f"orientation bits must lie in [0, 2^{g.size})")
        return Orientation(g, bits)
    arcs = []
    for part in text.split(","):
        tail, sep, head = part.partition(">")
        if not sep:
            raise GraphError(f"bad arc {part!r}; expected tail>head")
        arcs.append((int(tail), int(head)))
    return Orientation.from_arcs(g, arcs)


def _budget(args) -> Budget:
    return Budget(max_edges=args.budget_eps, max_nodes=args.max_nodes, time_limit=args.time_limit,
                  jobs=args.jobs)


def _graph_dot(g: BaseGraph) -> str:
    body = "".join(f"  {u} -- {v};\n" for u, v in g.edges)
    return "graph base {\n" + "".join(f"  {v};\n" for v in range(g.n)) + body + "}\n"


def _orientation_dot(o: Orientation) -> str:
    body = "".join(f"  {t} -> {h};\n" for t, h in o.arcs)
    return "digraph orientation {\n" + "".join(f"  {v};\n" for v in range(o.base.n)) + body + "}\n"


def _fmt(v) -> str:
    return "infinity" if v == INF else ("unknown" if v is None else str(v))


def cmd_tau(args, out) -> tuple[int, dict]:
    g = load_source(args)
    res = tau(g, _budget(args), args.mode, symmetry=not args.no_symmetry)
    data = {"graph": g.to_json(), "name": describe(g), **res.to_json()}
    if args.format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    elif args.format == "dot":
        out.write(res.witness.trace.to_dot() if res.witness else _graph_dot(g))
    else:
        out.write(f"tau({describe(g)}) = {_fmt(res.value)}"
                  f"{'' if res.exact else f'  (search stopped: {res.budget_hit}; lower bound {_fmt(res.lower_bound)})'}\n")
        out.write(f"mode {res.mode}; orientations searched {res.orientations_searched} "
                  f"of {res.orientations_enumerated}{' (block symmetry)' if res.symmetry else ''}\n")
        if res.witness:
            out.write(f"witness orientation bits {res.witness.orientation.bits}\n")
            out.write(res.witness.trace.summary() + "\n")
    return (EXIT_OK if res.exact else EXIT_PARTIAL), data


def cmd_brush(args, out) -> tuple[int, dict]:
    g = load_source(args)
    res = brush_number(g, args.budget_eps)
    data = {"graph": g.to_json(), "name": describe(g), **res.to_json()}
    if args.format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    elif args.format == "dot":
        out.write(_orientation_dot(res.orientation) if res.orientation else _graph_dot(g))
    else:
        out.write(f"b_r({describe(g)}) = {_fmt(res.value)}\n")
        if res.budget_hit:
            out.write(f"search stopped: {res.budget_hit}\n")
        if res.orientation:
            out.write(f"orientation bits {res.orientation.bits}; allocation {list(res.allocation)}\n")
            out.write(f"final brush counts {list(res.final_counts)}\n")
    return (EXIT_OK if res.exact else EXIT_PARTIAL), data


def cmd_simulate(args, out) -> tuple[int, dict]:
    g = load_source(args)
    o = parse_orientation(g, args.orientation)
    try:
        raw = json.loads(args.schedule.read_text())
    except json.JSONDecodeError as exc:
        raise GraphError(f"{args.schedule}: line {exc.lineno}: {exc.msg}") from None
    sched = AllocationSchedule.from_json(raw)
    trace = run(o, sched)
    data = {"graph": g.to_json(), "orientation": o.to_json(), "schedule": sched.to_json(),
            "trace": trace.to_json()}
    if args.format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    elif args.format == "dot":
        out.write(trace.to_dot())
    else:
        out.write(trace.summary() + "\n")
    return EXIT_OK, data


def cmd_family(args, out) -> tuple[int, dict]:
    spec = FamilySpec.parse(args.family)
    g = build_family(spec)
    closed = closed_form_tau(spec)
    res = tau(g, _budget(args), args.mode)
    data = {"family": str(spec), "closed_form": closed, "search": res.to_json(),
            "match": res.exact and res.value == closed}
    if args.format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"{spec}: n={g.n} edges={g.size}\n")
        out.write(f"closed form  {closed}\n")
        out.write(f"search       {_fmt(res.value)}{'' if res.exact else ' (partial)'}\n")
        out.write("match\n" if data["match"] else "MISMATCH\n")
    return (EXIT_OK if res.exact else EXIT_PARTIAL), data


def cmd_verify(args, out) -> tuple[int, dict]:
    if args.oracle_range < 1:
        raise ArgumentError("--oracle-range must be at least 1")
    report = run_verify(args.seed, args.oracle_range, args.mode, args.jobs)
    out.write(report_json(report) if args.format == "json" else report_table(report))
    return (EXIT_OK if report["passed"] else EXIT_INPUT), report


def cmd_erika(args, out) -> tuple[int, dict]:
    g = load_source(args)
    rep = erika_residency_report(g, _budget(args), args.mode)
    data = rep.to_json()
    if args.format == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"tau = {rep.tau}; optimal orientations {rep.optimal_orientations}\n")
        out.write("vertex  degree  predicted  tattoo  brush\n")
        for v in range(g.n):
            out.write(f"{v:>6}  {g.degrees[v]:>6}  {str(rep.predicted(v)):>9}  "
                      f"{str(rep.tattoo[v]):>6}  {str(rep.brush[v]):>5}\n")
        out.write(f"tattoo-model violations: {rep.violations('tattoo')}\n")
        out.write(f"brush-model violations: {rep.violations('brush')}\n")
    return EXIT_OK, data


COMMANDS = {
    "tau": cmd_tau,
    "brush": cmd_brush,
    "simulate": cmd_simulate,
    "family": cmd_family,
    "verify": cmd_verify,
    "erika": cmd_erika,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        code, data = COMMANDS[args.verb](args, out)
    except UsageError as exc:
        print(f"tattoo: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except INPUT_ERRORS as exc:
        print(f"tattoo: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        args.out.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
