"""Experiment runner, results CSV, geometric means and performance profiles."""

from __future__ import annotations

import csv
import json
import logging
import resource
import statistics
import sys
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .cactus import CactusGraph, LinkGraph, Solution, build_link_graph, validate_solution
from .errors import Infeasible, InvalidParams, SolverTimeout, WcapError
from .exact import solve_exact
from .formats import format_cost, parse_cactus, parse_cost, parse_links, parse_pi
from .generators import CostDistribution, generate_cactus, generate_raw_costs, generate_special
from .heuristics import gwc, mst_connect, smc
from .local_search import LocalSearchTimeout, local_search

log = logging.getLogger(__name__)

ALGORITHMS = ("gwc", "mst", "mst+ls3", "mst+ls5", "smc", "exact")
STATUSES = ("ok", "timeout", "infeasible", "memlimit", "error")
CSV_HEADER = ["instance", "algo", "seed", "status", "cost", "time_ms", "peak_kb"]
DEFAULT_SEEDS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class RunRecord:
    instance: str
    algo: str
    seed: int
    status: str
    cost: Fraction | None
    time_ms: int
    peak_kb: int = 0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        if self.time_ms < 0:
            raise ValueError("time_ms must be >= 0")
        if self.status == "ok" and self.cost is None:
            raise ValueError("an ok record needs a cost")
        if self.status not in ("ok", "timeout") and self.cost is not None:
            raise ValueError(f"a {self.status} record carries no cost")

    def key(self):
        return (self.instance, self.algo, self.seed)


@dataclass(frozen=True)
class ProfilePoint:
    algo: str
    tau: Fraction
    fraction: Fraction


@dataclass
class Instance:
    id: str
    cactus: CactusGraph
    links: LinkGraph
    meta: dict = field(default_factory=dict)


def solve(c: CactusGraph, lg: LinkGraph, algo: str, time_limit: float | None = None, seed: int | None = None) -> Solution:
    """Run one named pipeline; raises Infeasible, SolverTimeout or LocalSearchTimeout."""
    deadline = None if time_limit is None else time.perf_counter() + time_limit
    if algo == "gwc":
        sol = gwc(c, lg)
    elif algo == "smc":
        sol = smc(c, lg)
    elif algo == "mst":
        sol = mst_connect(c, lg)
    elif algo in ("mst+ls3", "mst+ls5"):
        sol = local_search(c, lg, mst_connect(c, lg), k=int(algo[-1]), deadline=deadline)
    elif algo == "exact":
        sol = solve_exact(c, lg, time_limit=time_limit)
    else:
        raise InvalidParams(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    if seed is not None:
        sol = Solution(sol.link_ids, sol.total_cost, sol.algorithm, seed, sol.wall_time)
    return sol


def peak_rss_kb() -> int:
    try:
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    except (AttributeError, OSError):  # pragma: no cover - non-POSIX
        log.warning("peak memory unavailable on this platform; recording 0")
        return 0
    # bytes on macOS, kilobytes on Linux
    return peak // 1024 if sys.platform == "darwin" else peak


def run_solve(instance: Instance, algo: str, seed: int, time_limit: float | None = None) -> RunRecord:
    """Solve, validate and record; solver failures end up in the status, never raised."""
    c, lg = instance.cactus, instance.links
    start = time.perf_counter()
    status, sol = "ok", None
    try:
        sol = solve(c, lg, algo, time_limit)
    except Infeasible:
        status = "infeasible"
    except SolverTimeout as exc:
        status, sol = "timeout", exc.incumbent
    except LocalSearchTimeout as exc:
        status, sol = "timeout", exc.solution
    except MemoryError:
        status = "memlimit"
    elapsed = time.perf_counter() - start
    if sol is not None and not validate_solution(c, lg, sol):
        log.error("%s on %s returned an invalid solution", algo, instance.id)
        status, sol = "error", None
    return RunRecord(
        instance.id,
        algo,
        seed,
        status,
        None if sol is None else sol.total_cost,
        int(round(elapsed * 1000)),
        peak_rss_kb(),
    )


def load_instance(cactus_path, links_path, pi_path=None, instance_id: str | None = None, scale: bool = False) -> Instance:
    pi = parse_pi(Path(pi_path).read_text()) if pi_path else None
    c = parse_cactus(Path(cactus_path).read_text(), pi)
    raw = parse_links(Path(links_path).read_text())
    if scale and raw:
        top = max(cost for _, _, cost in raw)
        if top > 0:
            raw = [(u, v, cost / top) for u, v, cost in raw]
    return Instance(instance_id or Path(cactus_path).stem, c, build_link_graph(c, raw))


def geometric_mean(values: Iterable) -> float:
    values = [float(v) for v in values]
    if not values:
        raise ValueError("geometric mean of no values")
    if any(v <= 0 for v in values):
        raise ValueError("geometric mean needs positive values")
    return statistics.geometric_mean(values)


def _metric(rec: RunRecord, metric: str):
    if metric == "cost":
        return rec.cost
    if metric == "time":
        return rec.time_ms
    if metric == "mem":
        return rec.peak_kb
    raise InvalidParams(f"unknown metric {metric!r}")


def default_taus(tau_max: Fraction = Fraction(3), step: Fraction = Fraction(1, 100)) -> list[Fraction]:
    taus = []
    tau = Fraction(1)
    while tau <= tau_max:
        taus.append(tau)
        tau += step
    return taus


def performance_profile(
    records: Sequence[RunRecord], metric: str = "cost", taus: Sequence | None = None
) -> list[ProfilePoint]:
    """Fraction of instances on which each algorithm is within tau times the best.

    Records of several seeds on one instance count as separate instances
    (keyed by instance and seed). Anything not ``ok`` only enlarges the
    denominator.
    """
    if not records:
        raise ValueError("no records")
    taus = [Fraction(t) for t in (taus if taus is not None else default_taus())]
    problems = sorted({(r.instance, r.seed) for r in records})
    algos = sorted({r.algo for r in records})
    by_key = {(r.instance, r.seed, r.algo): r for r in records}
    best: dict[tuple[str, int], object] = {}
    for r in records:
        if r.status != "ok":
            continue
        val = _metric(r, metric)
        key = (r.instance, r.seed)
        if key not in best or val < best[key]:
            best[key] = val
    points = []
    total = len(problems)
    for algo in algos:
        ratios = []
        for inst, seed in problems:
            r = by_key.get((inst, seed, algo))
            if r is None or r.status != "ok" or (inst, seed) not in best:
                continue
            ratios.append((Fraction(_metric(r, metric)), Fraction(best[(inst, seed)])))
        for tau in taus:
            hits = sum(1 for val, b in ratios if val <= tau * b)
            points.append(ProfilePoint(algo, tau, Fraction(hits, total)))
    return points


def write_records(records: Iterable[RunRecord], path) -> None:
    rows = sorted(records, key=RunRecord.key)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in rows:
            w.writerow(
                [r.instance, r.algo, r.seed, r.status, "" if r.cost is None else format_cost(r.cost), r.time_ms, r.peak_kb]
            )


def read_records(path) -> list[RunRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise InvalidParams(f"unexpected results header {reader.fieldnames}")
        return [
            RunRecord(
                row["instance"],
                row["algo"],
                int(row["seed"]),
                row["status"],
                parse_cost(row["cost"]) if row["cost"] else None,
                int(row["time_ms"]),
                int(row["peak_kb"]),
            )
            for row in reader
        ]


def write_profile(points: Iterable[ProfilePoint], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algo", "tau", "fraction"])
        for p in points:
            w.writerow([p.algo, f"{float(p.tau):.4f}", f"{float(p.fraction):.6f}"])


# grid files -----------------------------------------------------------------


@dataclass(frozen=True)
class GridTask:
    instance: dict
    algo: str
    seed: int
    time_limit: float | None
    base_dir: str


def build_instance(spec: dict, seed: int, base_dir: str = ".") -> Instance:
    """Materialize one grid instance entry for a seed.

    Entries either name files (``cactus``/``links``/optional ``pi``) or
    describe a generated instance via ``special`` or ``random`` plus a cost
    distribution under ``costs``. For random cacti the seed also picks the
    structure, mirroring one fresh cactus per seed.
    """
    base = Path(base_dir)
    iid = spec["id"]
    if "cactus" in spec:
        inst = load_instance(
            base / spec["cactus"],
            base / spec["links"],
            base / spec["pi"] if spec.get("pi") else None,
            iid,
            spec.get("scale", False),
        )
        return inst
    if "special" in spec:
        c = generate_special(spec["special"]["kind"], int(spec["special"]["n"]))
    elif "random" in spec:
        c = generate_cactus(int(spec["random"]["n"]), int(spec["random"]["cycles"]), seed)
    else:
        raise InvalidParams(f"instance {iid!r} has no cactus source")
    dist = CostDistribution.named(spec.get("costs", "u99"), spec.get("scale", True))
    raw = generate_raw_costs(c, dist, seed)
    return Instance(iid, c, build_link_graph(c, raw), {"costs": spec.get("costs", "u99")})


def load_grid(path) -> list[GridTask]:
    path = Path(path)
    grid = json.loads(path.read_text())
    algos = grid.get("algorithms", list(ALGORITHMS))
    for a in algos:
        if a not in ALGORITHMS:
            raise InvalidParams(f"unknown algorithm {a!r} in grid")
    seeds = grid.get("seeds", list(DEFAULT_SEEDS))
    limit = grid.get("time_limit")
    tasks = []
    for spec in grid["instances"]:
        for seed in seeds:
            for algo in algos:
                tasks.append(GridTask(spec, algo, int(seed), limit, str(path.parent)))
    return tasks


def _run_task(task: GridTask) -> RunRecord:
    try:
        inst = build_instance(task.instance, task.seed, task.base_dir)
    except WcapError as exc:
        log.error("cannot build instance %s: %s", task.instance.get("id"), exc)
        return RunRecord(task.instance.get("id", "?"), task.algo, task.seed, "error", None, 0, 0)
    return run_solve(inst, task.algo, task.seed, task.time_limit)


def run_grid(path, jobs: int = 1) -> list[RunRecord]:
    """Run every (instance, seed, algorithm) of a grid; output order is by key, not completion."""
    tasks = load_grid(path)
    if jobs <= 1:
        records = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_task, tasks))
    return sorted(records, key=RunRecord.key)
