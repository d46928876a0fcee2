"""Command-line interface: ``wcap solve|gen|verify|export-lp|bench|profile``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bench
from .cactus import build_link_graph, validate_solution
from .errors import Infeasible, SolverTimeout, WcapError
from .exact import build_cut_cover_program, export_lp
from .formats import (
    format_cactus,
    format_cost,
    format_links,
    format_solution,
    parse_cactus,
    parse_links,
    parse_pi,
    parse_solution,
)
from .generators import CostDistribution, generate_cactus, generate_raw_costs, generate_special
from .local_search import LocalSearchTimeout, local_search

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_TIMEOUT = 0, 1, 2, 3

log = logging.getLogger("wcap")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_solve(args) -> int:
    inst = bench.load_instance(args.cactus, args.links, args.pi, scale=args.scale)
    c, lg = inst.cactus, inst.links
    start = time.perf_counter()
    status, code, sol = "ok", EXIT_OK, None
    try:
        sol = bench.solve(c, lg, args.algo, args.time_limit, args.seed)
        if args.ls_depth and "+ls" not in args.algo:
            sol = local_search(c, lg, sol, k=args.ls_depth)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        status, code = "infeasible", EXIT_INFEASIBLE
    except SolverTimeout as exc:
        status, code, sol = "timeout", EXIT_TIMEOUT, exc.incumbent
        print(f"timeout: lower bound {format_cost(exc.lower_bound)}", file=sys.stderr)
    except LocalSearchTimeout as exc:
        status, code, sol = "timeout", EXIT_TIMEOUT, exc.solution
    elapsed_ms = int(round((time.perf_counter() - start) * 1000))
    if sol is not None:
        assert validate_solution(c, lg, sol)
        print(f"{status} algo={args.algo} cost={format_cost(sol.total_cost)} links={len(sol)} time_ms={elapsed_ms}")
        if args.solution:
            _write(args.solution, format_solution(sol, lg))
    else:
        print(f"{status} algo={args.algo} time_ms={elapsed_ms}")
    return code


def cmd_gen(args) -> int:
    if args.what == "cactus":
        c = generate_cactus(args.n, args.cycles, args.seed)
        _write(args.output, format_cactus(c, f"random cactus n={args.n} cycles={args.cycles} seed={args.seed}"))
    elif args.what == "special":
        c = generate_special(args.kind, args.n)
        _write(args.output, format_cactus(c, f"{args.kind}-{args.n}"))
    else:
        c = parse_cactus(Path(args.cactus).read_text())
        dist = CostDistribution.named(args.dist, scale_to_unit=args.scale)
        _write(args.output, format_links(generate_raw_costs(c, dist, args.seed)))
    return EXIT_OK


def cmd_verify(args) -> int:
    pi = parse_pi(Path(args.pi).read_text()) if args.pi else None
    c = parse_cactus(Path(args.cactus).read_text(), pi)
    raw = parse_links(Path(args.links).read_text())
    lg = build_link_graph(c, raw)
    claimed, pairs = parse_solution(Path(args.solution).read_text())
    cheapest: dict[tuple[int, int], Fraction] = {}
    for u, v, cost in raw:
        key = (min(u, v), max(u, v))
        cheapest[key] = min(cost, cheapest.get(key, cost))
    by_pair = {(l.u, l.v): l.id for l in lg}
    ids, total = set(), Fraction(0)
    for u, v in pairs:
        key = (min(u, v), max(u, v))
        if key not in cheapest:
            print(f"invalid: ({u}, {v}) is not a link", file=sys.stderr)
            return EXIT_INPUT
        total += cheapest[key]
        cu, cv = c.pi[u], c.pi[v]
        if cu != cv:
            ids.add(by_pair[(min(cu, cv), max(cu, cv))])
    if total != claimed:
        print(f"invalid: header cost {format_cost(claimed)} != link sum {format_cost(total)}", file=sys.stderr)
        return EXIT_INPUT
    if not validate_solution(c, lg, ids):
        print("infeasible: some minimum cut is not covered", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(f"valid cost={format_cost(total)} links={len(pairs)}")
    return EXIT_OK


def cmd_export_lp(args) -> int:
    inst = bench.load_instance(args.cactus, args.links, args.pi)
    model = build_cut_cover_program(inst.cactus, inst.links, dedup_rows=args.presolve)
    _write(args.output, export_lp(model))
    return EXIT_OK


def cmd_bench(args) -> int:
    records = bench.run_grid(args.grid, jobs=args.jobs)
    bench.write_records(records, args.output)
    return EXIT_OK


def cmd_profile(args) -> int:
    records = bench.read_records(args.input)
    taus = bench.default_taus(Fraction(args.tau_max), Fraction(args.tau_step))
    bench.write_profile(bench.performance_profile(records, args.metric, taus), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wcap", description="Weighted connectivity augmentation on cactus graphs")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("--cactus", required=True)
    s.add_argument("--links", required=True)
    s.add_argument("--pi")
    s.add_argument("--algo", required=True, choices=bench.ALGORITHMS)
    s.add_argument("--ls-depth", type=int, choices=(3, 5))
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--time-limit", type=float, help="seconds")
    s.add_argument("--scale", action="store_true", help="divide costs by the largest one")
    s.add_argument("--solution", help="write the solution file here")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="what", required=True)
    gc = gsub.add_parser("cactus")
    gc.add_argument("--n", type=int, required=True)
    gc.add_argument("--cycles", type=int, required=True)
    gc.add_argument("--seed", type=_seed, default=0)
    gc.add_argument("-o", "--output")
    gs = gsub.add_parser("special")
    gs.add_argument("--kind", choices=("cycle", "star"), required=True)
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("-o", "--output")
    gk = gsub.add_parser("costs")
    gk.add_argument("--dist", choices=("u2", "u9", "u99", "u100000"), required=True)
    gk.add_argument("--seed", type=_seed, default=0)
    gk.add_argument("--cactus", required=True)
    gk.add_argument("--scale", action="store_true", help="write costs divided by the largest")
    gk.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check a solution file")
    v.add_argument("--cactus", required=True)
    v.add_argument("--links", required=True)
    v.add_argument("--pi")
    v.add_argument("--solution", required=True)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export-lp", help="write the cut-cover ILP in LP format")
    e.add_argument("--cactus", required=True)
    e.add_argument("--links", required=True)
    e.add_argument("--pi")
    e.add_argument("--presolve", action="store_true", help="drop duplicate rows")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export_lp)

    b = sub.add_parser("bench", help="run a benchmark grid")
    b.add_argument("--grid", required=True)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    pr = sub.add_parser("profile", help="performance profile from results")
    pr.add_argument("-i", "--input", required=True)
    pr.add_argument("--metric", choices=("cost", "time", "mem"), default="cost")
    pr.add_argument("--tau-max", default="3")
    pr.add_argument("--tau-step", default="0.01")
    pr.add_argument("-o", "--output")
    pr.set_defaults(func=cmd_profile)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (WcapError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
