"""Constructive heuristics: greedy weight coverage, MST-Connect and an SMC-like baseline."""

from __future__ import annotations

import heapq
import time

from .cactus import CactusGraph, LinkGraph, Solution, validate_solution
from .dynamic import DisjointSet, DynamicCactus
from .errors import Infeasible
from .feasibility import is_disposable


def gwc(c: CactusGraph, lg: LinkGraph) -> Solution:
    """Greedy weight coverage: repeatedly add the link with least cost per newly covered cut.

    Coverage counts only shrink as the cactus contracts, so ratios only grow
    and a lazily refreshed heap pops the true minimum (ties: cost, then id).
    """
    start = time.perf_counter()
    dc = DynamicCactus(c)
    heap = []
    for l in lg:
        a = dc.covered(l.u, l.v)
        if a:
            heap.append((l.cost / a, l.cost, l.id, a))
    heapq.heapify(heap)
    chosen = []
    while not dc.is_fully_augmented():
        if not heap:
            raise Infeasible(f"{dc.remaining_cuts()} minimum cuts cannot be covered")
        ratio, cost, lid, a = heapq.heappop(heap)
        l = lg[lid]
        now = dc.covered(l.u, l.v)
        if now == 0:
            continue
        if now != a:
            heapq.heappush(heap, (cost / now, cost, lid, now))
            continue
        gained = dc.add_link(l.u, l.v)
        assert gained == now > 0
        chosen.append(lid)
    return Solution.from_ids(lg, chosen, algorithm="gwc", wall_time=time.perf_counter() - start)


def kruskal_msf(lg: LinkGraph) -> list[int]:
    """Ids of a minimum spanning forest, ties broken by link id."""
    dsu = DisjointSet()
    forest = []
    for l in sorted(lg, key=lambda l: (l.cost, l.id)):
        for x in (l.u, l.v):
            if x not in dsu.parent:
                dsu.parent[x] = x
                dsu.size[x] = 1
        if dsu.find(l.u) != dsu.find(l.v):
            dsu.union(l.u, l.v)
            forest.append(l.id)
    return forest


def prune_disposable(c: CactusGraph, lg: LinkGraph, ids) -> list[int]:
    """Drop disposable links, heaviest first (ties: larger id first)."""
    current = {i: lg[i] for i in ids}
    for lid in sorted(current, key=lambda i: (lg[i].cost, i), reverse=True):
        if is_disposable(c, current.values(), current[lid]):
            del current[lid]
    return sorted(current)


def mst_connect(c: CactusGraph, lg: LinkGraph) -> Solution:
    start = time.perf_counter()
    forest = kruskal_msf(lg)
    if not validate_solution(c, lg, forest):
        raise Infeasible("minimum spanning forest leaves cuts uncovered")
    kept = prune_disposable(c, lg, forest)
    return Solution.from_ids(lg, kept, algorithm="mst", wall_time=time.perf_counter() - start)


def smc(c: CactusGraph, lg: LinkGraph) -> Solution:
    """Cheapest-incident-link baseline in the spirit of SMC.

    Vertices are visited by increasing id; a vertex whose singleton is a
    still-uncovered minimum cut receives its cheapest incident link that
    covers something. Cuts left over afterwards are closed by adding the
    cheapest link that still covers any cut.
    """
    start = time.perf_counter()
    dc = DynamicCactus(c)
    chosen = []
    touched = set()
    singles = c.singleton_cut_vertices()

    def useful(lid):
        l = lg[lid]
        return dc.find(l.u) != dc.find(l.v)

    for v in range(1, c.n + 1):
        if dc.is_fully_augmented():
            break
        # {v} is already covered once a chosen link ends at v
        if v not in singles or v in touched:
            continue
        cands = [lid for lid in lg.incident(v) if useful(lid)]
        if not cands:
            continue
        best = min(cands, key=lambda i: (lg[i].cost, i))
        dc.add_link(lg[best].u, lg[best].v)
        chosen.append(best)
        touched.update((lg[best].u, lg[best].v))

    while not dc.is_fully_augmented():
        cands = [l.id for l in lg if useful(l.id)]
        if not cands:
            raise Infeasible(f"{dc.remaining_cuts()} minimum cuts cannot be covered")
        best = min(cands, key=lambda i: (lg[i].cost, i))
        dc.add_link(lg[best].u, lg[best].v)
        chosen.append(best)
    return Solution.from_ids(lg, chosen, algorithm="smc-like", wall_time=time.perf_counter() - start)

