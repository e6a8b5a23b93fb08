"""``cdnlab`` command-line entry point.

Exit codes: 0 success, 1 usage error, 2 domain error (bad input file,
invalid parameters, malformed ARL, ...).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from cdnlab import arl as arl_mod
from cdnlab import topology
from cdnlab.iridium.ring import F_POLICIES, RingError
from cdnlab.placement import (
    PlacementError,
    PlacementProblem,
    backtracking_greedy,
    brute_force_optimal,
    build_khst,
    greedy_placement,
    kcenter_for_diameter_result,
    khst_centers_by_budget,
    khst_centers_by_diameter,
    min_kcenter_2approx,
    parse_demands,
    transit_node_placement,
)
from cdnlab.sim import Scenario, ScenarioError, compare_protocols, format_table, run_scenario, sweep
from cdnlab.sim.scenario import load_scenario

DEFAULT_SEED = 0
FORMATS = ("csv", "json", "human")
PLACE_ALGORITHMS = ("khst-d", "khst-k", "kcenter", "kcenter-d", "greedy", "backtrack",
                    "transit", "optimal")
OUT_DIR_ENV = "CDNLAB_OUT_DIR"

DOMAIN_ERRORS = (topology.GraphError, PlacementError, ScenarioError, RingError,
                 arl_mod.ArlError, OSError, UnicodeDecodeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ------------------------------------------------------------------ output

def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    folder = os.environ.get(OUT_DIR_ENV)
    if folder and not os.path.isabs(out):
        out = os.path.join(folder, out)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _render_mapping(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(data.keys())
        writer.writerow(json.dumps(v) if isinstance(v, (list, dict)) else v for v in data.values())
        return buf.getvalue()
    width = max((len(k) for k in data), default=0)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in data.items())


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


# -------------------------------------------------------------------- topo

def cmd_topo(args) -> int:
    if args.action == "gen":
        g = topology.random_graph(args.n, args.p, args.seed)
        _emit(topology.dump_graph(g), args.out)
        return 0
    g = topology.load_graph(_read(args.graph))
    comps = g.components()
    info = {"N": g.n, "edges": g.edge_count, "connected": len(comps) == 1,
            "components": len(comps)}
    if len(comps) == 1:
        info["diameter"] = topology.all_pairs_distances(g).diameter
    top = topology.outdegrees(g)[:1]
    if top:
        info["max_degree_node"], info["max_degree"] = top[0]
    _emit(_render_mapping(info, args.format or "human"), args.out)
    return 0


# ------------------------------------------------------------------- place

def _need(args, name, flag):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"place {args.algorithm}: {flag} is required")
    return value


def cmd_place(args) -> int:
    g = topology.load_graph(_read(args.graph))
    demands = parse_demands(_read(args.demands), g.n) if args.demands else ()
    algo = args.algorithm
    if algo in ("khst-d", "khst-k"):
        tree = build_khst(g, args.k, args.seed)
        if algo == "khst-d":
            result = khst_centers_by_diameter(tree, _need(args, "D", "-D"))
        else:
            result = khst_centers_by_budget(tree, _need(args, "K", "-K"))
    elif algo == "kcenter":
        result = min_kcenter_2approx(g, _need(args, "K", "-K"))
    elif algo == "kcenter-d":
        result = kcenter_for_diameter_result(g, _need(args, "D", "-D"))
    elif algo == "transit":
        result = transit_node_placement(g, _need(args, "M", "-M"))
    else:
        problem = PlacementProblem.from_graph(g, demands=demands)
        M = _need(args, "M", "-M")
        if algo == "greedy":
            result = greedy_placement(problem, M)
        elif algo == "backtrack":
            result = backtracking_greedy(problem, M, args.ell)
        else:
            result = brute_force_optimal(problem, M, objective=args.objective)
    fmt = args.format or "json"
    if fmt == "json":
        text = result.to_json() + "\n"
    else:
        data = result.to_dict()
        data["centers"] = " ".join(map(str, result.centers))
        text = _render_mapping(data, fmt)
    _emit(text, args.out)
    return 0


# --------------------------------------------------------------------- sim

def _scenario(args) -> Scenario:
    s = load_scenario(args.scenario) if args.scenario else Scenario()
    if args.set:
        s = s.with_overrides(args.set)
    if args.seed is not None:
        s = s.replace(seed=args.seed)
    return s


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def cmd_sim(args) -> int:
    s = _scenario(args)
    fmt = args.format
    if args.action == "run":
        report = run_scenario(s)
        fmt = fmt or "csv"
        if fmt == "csv":
            text = report.to_csv()
        elif fmt == "json":
            text = report.summary_json()
        else:
            text = report.human()
        _emit(text, args.out)
        return 0
    if args.action == "compare":
        sizes = _int_list(args.N) if args.N else [s.N]
        _, rows = compare_protocols(s, sizes, workers=args.workers)
    else:
        policies = [p.strip() for p in args.f_policy.split(",") if p.strip()]
        unknown = [p for p in policies if p not in F_POLICIES]
        if unknown or not policies:
            raise UsageError(f"unknown f-policy {unknown}; choose from {sorted(F_POLICIES)}")
        rows = sweep(s, policies, workers=args.workers)
    _emit(format_table(rows, fmt or "human"), args.out)
    return 0


# --------------------------------------------------------------------- arl

def cmd_arl(args) -> int:
    if args.action == "parse":
        parsed = arl_mod.parse_arl(args.url, lenient=args.lenient)
        data = parsed.fields()
        if parsed.path_serial is not None:
            data["path_serial"] = parsed.path_serial
        _emit(_render_mapping(data, args.format or "json"), args.out)
        return 0
    text = arl_mod.akamaize(args.origin, args.serial, args.domain, args.type_field,
                            args.provider, args.object_data)
    _emit(text + "\n", args.out)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=FORMATS, help="output format")

    sim_common = _Parser(add_help=False)
    sim_common.add_argument("--seed", type=int, default=None,
                            help=f"random seed; overrides the scenario file (default {DEFAULT_SEED})")
    sim_common.add_argument("--out", help="write output here instead of stdout")
    sim_common.add_argument("--format", choices=FORMATS, help="output format")
    sim_common.add_argument("scenario", nargs="?", help="scenario file of key = value lines")
    sim_common.add_argument("--set", action="append", metavar="KEY=VALUE",
                            help="override one scenario key (repeatable)")
    sim_common.add_argument("--workers", type=int, default=4, help="worker threads")

    parser = _Parser(prog="cdnlab", description="CDN placement and content-location workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    topo = sub.add_parser("topo", help="generate or inspect graphs")
    tsub = topo.add_subparsers(dest="action", required=True, parser_class=_Parser)
    gen = tsub.add_parser("gen", parents=[common], help="random connected unit-length graph")
    gen.add_argument("-n", type=int, required=True, help="node count")
    gen.add_argument("-p", type=float, required=True, help="edge probability")
    info = tsub.add_parser("info", parents=[common], help="size, connectivity and diameter")
    info.add_argument("graph")

    place = sub.add_parser("place", parents=[common], help="replica placement")
    place.add_argument("algorithm", choices=PLACE_ALGORITHMS)
    place.add_argument("graph")
    place.add_argument("-M", type=int, help="number of replicas")
    place.add_argument("-K", type=int, help="number of centers")
    place.add_argument("-D", type=float, help="diameter bound")
    place.add_argument("--k", type=float, default=2.0, help="k-HST shrink factor (default 2)")
    place.add_argument("--ell", type=int, default=1, help="backtracking depth (default 1)")
    place.add_argument("--objective", choices=("total-cost", "max-radius"), default="total-cost")
    place.add_argument("--demands", help="file of 'node weight' lines")

    sim = sub.add_parser("sim", help="Iridium / Chord simulation")
    ssub = sim.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ssub.add_parser("run", parents=[sim_common], help="run one scenario")
    cmp_ = ssub.add_parser("compare", parents=[sim_common], help="Iridium vs Chord per N")
    cmp_.add_argument("-N", help="comma-separated ring sizes")
    sw = ssub.add_parser("sweep", parents=[sim_common], help="one run per f(N) policy")
    sw.add_argument("--f-policy", default=",".join(F_POLICIES),
                    help=f"comma-separated subset of {sorted(F_POLICIES)}")

    arl = sub.add_parser("arl", help="Akamai resource locators")
    asub = arl.add_subparsers(dest="action", required=True, parser_class=_Parser)
    ap = asub.add_parser("parse", parents=[common], help="split an ARL into fields")
    ap.add_argument("url")
    ap.add_argument("--lenient", action="store_true", help="allow differing serials")
    am = asub.add_parser("make", parents=[common], help="akamaize an origin URL")
    am.add_argument("--origin", required=True)
    am.add_argument("--serial", required=True)
    am.add_argument("--domain", required=True)
    am.add_argument("--type", dest="type_field", required=True)
    am.add_argument("--provider", required=True)
    am.add_argument("--object-data", required=True)
    return parser


COMMANDS = {"topo": cmd_topo, "place": cmd_place, "sim": cmd_sim, "arl": cmd_arl}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"cdnlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
