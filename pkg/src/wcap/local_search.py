"""LS(k): improve a solution by swapping links along short alternating paths.

A candidate swap is a simple path of at most ``k`` links whose links alternate
between the current solution (removed, ``l_out``) and the rest of a reduced
link set (added, ``l_in``). The path may close back onto its start vertex.
A candidate must strictly lower the cost, and no endpoint of a removed link
whose singleton is a minimum cut may be left without any solution link.
Candidates are tried best gain first; a flow check decides validity.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .cactus import CactusGraph, LinkGraph, Solution
from .errors import WcapError
from .feasibility import is_swap_valid
from .heuristics import kruskal_msf


@dataclass(frozen=True)
class SwapCandidate:
    l_in: tuple[int, ...]
    l_out: tuple[int, ...]
    gain: Fraction
    path: tuple[int, ...]


def canonical_path(path) -> tuple[int, ...]:
    path = tuple(path)
    rev = path[::-1]
    return min(path, rev)


class PathCache:
    """Vertex sequences of swaps already found invalid."""

    def __init__(self):
        self._seen: set[tuple[int, ...]] = set()

    def __contains__(self, path) -> bool:
        return canonical_path(path) in self._seen

    def add(self, path) -> None:
        self._seen.add(canonical_path(path))

    def __len__(self) -> int:
        return len(self._seen)


def integer_costs(lg: LinkGraph) -> tuple[dict[int, int], int]:
    """Costs scaled by a common denominator so sums stay exact integers."""
    den = 1
    for l in lg:
        den = lcm(den, l.cost.denominator)
    return {l.id: int(l.cost * den) for l in lg}, den


def reduce_link_set(
    c: CactusGraph, lg: LinkGraph, t: int = 2, keep=()
) -> LinkGraph:
    """Union of ``t`` edge-disjoint minimum spanning forests, plus the ``keep`` links."""
    if t < 1:
        raise ValueError("t must be >= 1")
    chosen: set[int] = set()
    rest = lg
    for _ in range(t):
        forest = kruskal_msf(rest)
        if not forest:
            break
        chosen.update(forest)
        rest = lg.subset(set(lg.ids()) - chosen)
    chosen.update(keep)
    return lg.subset(chosen)


def get_swap_candidates(
    c: CactusGraph,
    reduced: LinkGraph,
    solution,
    k: int,
    cache: PathCache | None = None,
    singles: frozenset[int] | None = None,
) -> list[SwapCandidate]:
    """All improving, non-trivial alternating paths with 1..k links, best gain first."""
    ids = solution.link_ids if isinstance(solution, Solution) else frozenset(solution)
    costs, den = integer_costs(reduced)
    if singles is None:
        singles = c.singleton_cut_vertices()
    adj_in: dict[int, list[tuple[int, int]]] = {}
    adj_out: dict[int, list[tuple[int, int]]] = {}
    sol_deg: dict[int, int] = {}
    for l in reduced:
        side = adj_out if l.id in ids else adj_in
        side.setdefault(l.u, []).append((l.v, l.id))
        side.setdefault(l.v, []).append((l.u, l.id))
        if l.id in ids:
            sol_deg[l.u] = sol_deg.get(l.u, 0) + 1
            sol_deg[l.v] = sol_deg.get(l.v, 0) + 1

    found: dict[tuple[int, ...], tuple[int, tuple, tuple, tuple]] = {}

    def nontrivial(l_in, l_out) -> bool:
        delta: dict[int, int] = {}
        for lid in l_out:
            l = reduced[lid]
            delta[l.u] = delta.get(l.u, 0) - 1
            delta[l.v] = delta.get(l.v, 0) - 1
        for lid in l_in:
            l = reduced[lid]
            delta[l.u] = delta.get(l.u, 0) + 1
            delta[l.v] = delta.get(l.v, 0) + 1
        for lid in l_out:
            l = reduced[lid]
            for x in (l.u, l.v):
                if x in singles and sol_deg.get(x, 0) + delta[x] <= 0:
                    return False
        return True

    def record(path, l_in, l_out, gain):
        if gain >= 0 or not l_out:
            return
        key = canonical_path(path)
        if key in found or (cache is not None and key in cache):
            return
        if not nontrivial(l_in, l_out):
            return
        found[key] = (gain, key, tuple(l_in), tuple(l_out))

    def extend(path, on_path, l_in, l_out, gain, last_out):
        if len(l_in) + len(l_out) >= k:
            return
        x = path[-1]
        phases = (True, False) if last_out is None else (not last_out,)
        for use_out in phases:
            for y, lid in (adj_out if use_out else adj_in).get(x, ()):
                closing = y == path[0] and len(path) >= 3
                if y in on_path and not closing:
                    continue
                path.append(y)
                if use_out:
                    l_out.append(lid)
                    g = gain - costs[lid]
                else:
                    l_in.append(lid)
                    g = gain + costs[lid]
                record(path, l_in, l_out, g)
                if not closing:
                    on_path.add(y)
                    extend(path, on_path, l_in, l_out, g, use_out)
                    on_path.discard(y)
                (l_out if use_out else l_in).pop()
                path.pop()

    vertices = sorted(set(adj_in) | set(adj_out))
    for v in vertices:
        extend([v], {v}, [], [], 0, None)

    ordered = sorted(found.values())
    return [
        SwapCandidate(tuple(sorted(li)), tuple(sorted(lo)), Fraction(g, den), p)
        for g, p, li, lo in ordered
    ]


def local_search(
    c: CactusGraph,
    lg: LinkGraph,
    solution: Solution,
    k: int = 3,
    t: int = 2,
    deadline: float | None = None,
) -> Solution:
    """Apply improving valid swaps until no candidate is left (or ``deadline`` passes)."""
    start = time.perf_counter()
    reduced = reduce_link_set(c, lg, t, keep=solution.link_ids)
    singles = c.singleton_cut_vertices()
    cache = PathCache()
    current = set(solution.link_ids)
    cands = get_swap_candidates(c, reduced, current, k, cache, singles)
    timed_out = False
    idx = 0
    while idx < len(cands):
        if deadline is not None and time.perf_counter() > deadline:
            timed_out = True
            break
        cand = cands[idx]
        idx += 1
        sol_links = [reduced[i] for i in current]
        l_in = [reduced[i] for i in cand.l_in]
        l_out = [reduced[i] for i in cand.l_out]
        if is_swap_valid(c, sol_links, l_in, l_out):
            assert len(cand.l_in) + len(cand.l_out) <= k and cand.gain < 0
            assert set(cand.l_out) <= current and not set(cand.l_in) & current
            current.difference_update(cand.l_out)
            current.update(cand.l_in)
            cands = get_swap_candidates(c, reduced, current, k, cache, singles)
            idx = 0
        else:
            cache.add(cand.path)
    name = f"{solution.algorithm}+ls{k}" if solution.algorithm else f"ls{k}"
    out = Solution.from_ids(
        lg, current, algorithm=name, seed=solution.seed, wall_time=time.perf_counter() - start
    )
    if timed_out:
        raise LocalSearchTimeout(out)
    return out


class LocalSearchTimeout(WcapError):
    """Deadline hit; ``solution`` is the valid, partially improved result."""

    def __init__(self, solution: Solution):
        super().__init__("local search deadline reached")
        self.solution = solution
