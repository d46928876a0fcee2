"""Exact cut-cover integer program: one binary per link, one covering row per minimum cut.

The solver is a depth-first branch and bound warm-started with the better of
MST-Connect and GWC (each polished by LS(3)). Every node fixes columns forced
by single-candidate rows, bounds with a Lagrangian relaxation of the rows,
fixes columns by reduced cost, tries a greedy completion, and finally branches
inside the open row with the fewest candidates.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from .cactus import CactusGraph, LinkGraph, MinCutRef, Solution
from .errors import Infeasible, SolverTimeout, TooLarge
from .formats import format_cost
from .heuristics import gwc, mst_connect
from .local_search import LocalSearchTimeout, integer_costs, local_search


class InfeasibleRow(Infeasible):
    def __init__(self, cut: MinCutRef):
        super().__init__(f"no link covers minimum cut {cut}")
        self.cut = cut


@dataclass(frozen=True)
class CutCoverModel:
    columns: tuple[int, ...]  # link ids
    costs: tuple[Fraction, ...]
    rows: tuple[tuple[int, ...], ...]  # column indices per covering row
    cuts: tuple[MinCutRef, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)


def coverage_matrix(c: CactusGraph, lg: LinkGraph) -> np.ndarray:
    """Boolean ``(#cuts, #links)`` matrix: entry is set iff the link covers the cut."""
    ivs = c.cut_intervals
    links = lg.links
    out = np.zeros((len(ivs), len(links)), dtype=bool)
    if len(ivs) == 0 or not links:
        return out
    tin = c.blocks.tin
    tu = np.array([tin[l.u] for l in links], dtype=np.int64)
    tv = np.array([tin[l.v] for l in links], dtype=np.int64)
    chunk = max(1, 4_000_000 // len(links))
    for s in range(0, len(ivs), chunk):
        lo, hi = ivs[s : s + chunk, 0:1], ivs[s : s + chunk, 1:2]
        out[s : s + chunk] = ((lo <= tu) & (tu < hi)) != ((lo <= tv) & (tv < hi))
    return out


def build_cut_cover_program(c: CactusGraph, lg: LinkGraph, dedup_rows: bool = False) -> CutCoverModel:
    mat = coverage_matrix(c, lg)
    cuts = c.min_cuts
    rows = []
    kept_cuts = []
    seen = set()
    for r in range(mat.shape[0]):
        cols = tuple(int(x) for x in np.flatnonzero(mat[r]))
        if not cols:
            raise InfeasibleRow(cuts[r])
        if dedup_rows:
            if cols in seen:
                continue
            seen.add(cols)
        rows.append(cols)
        kept_cuts.append(cuts[r])
    return CutCoverModel(
        tuple(l.id for l in lg.links),
        tuple(l.cost for l in lg.links),
        tuple(rows),
        tuple(kept_cuts),
    )


def _lp_number(value: Fraction) -> str:
    text = format_cost(value)
    return text if "/" not in text else repr(float(value))


def export_lp(model: CutCoverModel, per_line: int = 8) -> str:
    """CPLEX LP text for the model; identical models give identical bytes."""
    names = [f"x{lid}" for lid in model.columns]

    def wrap(prefix, terms):
        if not terms:
            return [prefix.rstrip()]
        lines = []
        for s in range(0, len(terms), per_line):
            chunk = " + ".join(terms[s : s + per_line])
            lines.append((prefix if s == 0 else "   + ") + chunk)
        return lines

    out = ["\\ cut cover model", "Minimize"]
    out += wrap(" obj: ", [f"{_lp_number(cst)} {nm}" for cst, nm in zip(model.costs, names)])
    out.append("Subject To")
    for r, cols in enumerate(model.rows):
        lines = wrap(f" r{r}: ", [names[j] for j in cols])
        lines[-1] += " >= 1"
        out += lines
    out.append("Binaries")
    for s in range(0, len(names), per_line):
        out.append(" " + " ".join(names[s : s + per_line]))
    out.append("End")
    return "\n".join(out) + "\n"


class _Node:
    __slots__ = ("uncov", "free", "chosen", "cost", "lb", "duals")

    def __init__(self, uncov, free, chosen, cost, lb, duals):
        self.uncov, self.free, self.chosen = uncov, free, chosen
        self.cost, self.lb, self.duals = cost, lb, duals


class _Search:
    """Depth-first branch and bound over the 0/1 covering matrix.

    Bounds come from the Lagrangian relaxation of the covering rows, tuned by
    subgradient steps and warm-started from the parent's multipliers. Since
    every cost is a multiple of ``grain``, bounds round up to that grid.
    """

    ROOT_ITERS, ROOT_PATIENCE = 1500, 20
    NODE_ITERS, NODE_PATIENCE = 60, 5

    def __init__(self, model: CutCoverModel, int_costs: list[int], deadline: float | None):
        m, n = model.shape
        self.a = np.zeros((m, n), dtype=bool)
        for r, cols in enumerate(model.rows):
            self.a[r, list(cols)] = True
        self.cost = np.array(int_costs, dtype=np.int64)
        self.fcost = self.cost.astype(float)
        self.grain = int(np.gcd.reduce(self.cost)) if n and self.cost.any() else 1
        self.grain = max(self.grain, 1)
        self.tol = 1e-9 * max(1.0, float(self.cost.sum()))
        self.deadline = deadline
        self.nodes = 0

    def _round_up(self, value: float) -> int:
        g = self.grain
        return int(np.ceil((value - self.tol) / g)) * g

    def propagate(self, node: _Node) -> bool:
        """Fix columns forced by rows with one free column; False if a row has none."""
        while True:
            sub = self.a[node.uncov][:, node.free]
            if sub.shape[0] == 0:
                return True
            counts = sub.sum(axis=1)
            if (counts == 0).any():
                return False
            single = counts == 1
            if not single.any():
                return True
            free_idx = np.flatnonzero(node.free)
            forced = np.unique(free_idx[sub[single].argmax(axis=1)])
            node.free[forced] = False
            node.chosen[forced] = True
            node.cost += int(self.cost[forced].sum())
            node.uncov &= ~self.a[:, forced].any(axis=1)

    def lagrangian(self, rows, cols, duals, upper: int, iters: int, patience: int):
        """Best Lagrangian bound found, with its multipliers and reduced costs."""
        sub = self.a[np.ix_(rows, cols)].astype(float)
        c = self.fcost[cols]
        u = duals.copy()
        best_val, best_u, best_red = -np.inf, u, c
        step, stall = 2.0, 0
        for _ in range(iters):
            red = c - u @ sub
            neg = red < 0
            val = u.sum() + red[neg].sum()
            if val > best_val + 1e-12:
                best_val, best_u, best_red, stall = val, u, red, 0
            else:
                stall += 1
                if stall >= patience:
                    step, stall = step / 2, 0
            if step < 1e-4 or best_val > upper - self.grain + self.tol:
                break
            grad = 1.0 - sub[:, neg].sum(axis=1)
            grad[(u <= 0) & (grad < 0)] = 0.0
            norm = grad @ grad
            if norm == 0:
                break
            u = np.maximum(0.0, u + step * (1.05 * upper - val) / norm * grad)
        return best_val, best_u, best_red

    def greedy_cover(self, node: _Node, red) -> tuple[int, np.ndarray] | None:
        """Cheapest-per-row greedy completion, then redundant columns dropped."""
        uncov = node.uncov.copy()
        free_idx = np.flatnonzero(node.free)
        if free_idx.size == 0:
            return None
        a = self.a[:, free_idx]
        weight = np.maximum(red, 0.0) + 1e-9 * self.fcost[free_idx] + 1e-12
        picked = []
        while uncov.any():
            gain = a[uncov].sum(axis=0)
            if not gain.any():
                return None
            score = np.where(gain > 0, weight / np.maximum(gain, 1), np.inf)
            j = int(np.argmin(score))
            picked.append(free_idx[j])
            uncov &= ~a[:, j]
        chosen = node.chosen.copy()
        chosen[picked] = True
        # drop redundant picks, most expensive first
        for j in sorted(picked, key=lambda j: (-self.cost[j], -j)):
            chosen[j] = False
            if not self.a[:, chosen].any(axis=1).all():
                chosen[j] = True
        return int(self.cost[chosen].sum()), chosen

    def run(self, best_cost: int, best_mask: np.ndarray):
        m, n = self.a.shape
        root = _Node(np.ones(m, bool), np.ones(n, bool), np.zeros(n, bool), 0, 0, None)
        root_lb = None
        stack = [root]
        while stack:
            if self.deadline is not None and time.perf_counter() > self.deadline:
                open_lb = min(node.lb for node in stack)
                raise _Timeout(best_cost, best_mask, min(open_lb, best_cost), root_lb)
            node = stack.pop()
            self.nodes += 1
            if not self.propagate(node) or node.cost >= best_cost:
                continue
            if not node.uncov.any():
                best_cost, best_mask = node.cost, node.chosen
                continue
            rows = np.flatnonzero(node.uncov)
            cols = np.flatnonzero(node.free)
            if node.duals is None:
                sub = self.a[np.ix_(rows, cols)]
                per = self.fcost[cols] / np.maximum(sub.sum(axis=0), 1)
                duals = np.where(sub, per, np.inf).min(axis=1)
                iters, patience = self.ROOT_ITERS, self.ROOT_PATIENCE
            else:
                duals = node.duals[rows]
                iters, patience = self.NODE_ITERS, self.NODE_PATIENCE
            val, u, red = self.lagrangian(rows, cols, duals, best_cost, iters, patience)
            lb = node.cost + self._round_up(val)
            if root_lb is None:
                root_lb = lb
            if lb >= best_cost:
                continue
            found = self.greedy_cover(node, red)
            if found is not None and found[0] < best_cost:
                best_cost, best_mask = found
                if lb >= best_cost:
                    continue
            # reduced-cost fixing
            slack = best_cost - node.cost
            g = self.grain
            drop = (red > 0) & (np.ceil((val + red - self.tol) / g) * g >= slack)
            force = (red < 0) & (np.ceil((val - red - self.tol) / g) * g >= slack)
            if drop.any() or force.any():
                node.free[cols[drop]] = False
                if force.any():
                    fc = cols[force]
                    node.free[fc] = False
                    node.chosen[fc] = True
                    node.cost += int(self.cost[fc].sum())
                    node.uncov &= ~self.a[:, fc].any(axis=1)
                full = np.zeros(m)
                full[rows] = u
                node.duals, node.lb = full, lb
                stack.append(node)
                continue
            full = np.zeros(m)
            full[rows] = u
            # branch inside the uncovered row with the fewest free columns
            sub = self.a[np.ix_(rows, cols)]
            r = int(np.argmin(sub.sum(axis=1)))
            in_row = np.flatnonzero(sub[r])
            j = int(cols[in_row[np.lexsort((cols[in_row], red[in_row]))[0]]])
            without = _Node(node.uncov.copy(), node.free.copy(), node.chosen.copy(), node.cost, lb, full)
            without.free[j] = False
            with_j = _Node(node.uncov & ~self.a[:, j], node.free.copy(), node.chosen.copy(), node.cost + int(self.cost[j]), lb, full)
            with_j.free[j] = False
            with_j.chosen[j] = True
            stack.append(without)
            stack.append(with_j)
        if root_lb is None:
            root_lb = best_cost
        return best_cost, best_mask, root_lb


class _Timeout(Exception):
    def __init__(self, best_cost, best_mask, bound, root_lb):
        self.best_cost, self.best_mask, self.bound, self.root_lb = best_cost, best_mask, bound, root_lb


@dataclass
class ExactStats:
    nodes: int = 0
    root_lower_bound: Fraction | None = None
    warm_start_cost: Fraction | None = None


def solve_exact(
    c: CactusGraph,
    lg: LinkGraph,
    time_limit: float | None = None,
    improve_warm_start: bool = True,
    presolve: bool = True,
    stats: ExactStats | None = None,
) -> Solution:
    """Optimal augmentation, or :class:`SolverTimeout` carrying incumbent and bound."""
    start = time.perf_counter()
    deadline = None if time_limit is None else start + time_limit
    model = build_cut_cover_program(c, lg, dedup_rows=presolve)

    starts = [mst_connect(c, lg), gwc(c, lg)]
    if improve_warm_start:
        improved = []
        for s in starts:
            if deadline is not None and time.perf_counter() >= deadline:
                break
            try:
                improved.append(local_search(c, lg, s, k=3, deadline=deadline))
            except LocalSearchTimeout as exc:
                improved.append(exc.solution)
        starts += improved
    warm = min(starts, key=lambda s: (s.total_cost, s.sorted_ids()))
    col_index = {lid: j for j, lid in enumerate(model.columns)}
    warm_mask = np.zeros(len(model.columns), dtype=bool)
    warm_mask[[col_index[i] for i in warm.link_ids]] = True

    int_cost_map, den = integer_costs(lg)
    int_costs = [int_cost_map[lid] for lid in model.columns]
    warm_cost = sum(int_costs[j] for j in np.flatnonzero(warm_mask))
    if stats is not None:
        stats.warm_start_cost = Fraction(warm_cost, den)

    search = _Search(model, int_costs, deadline)

    def to_solution(mask) -> Solution:
        ids = [model.columns[j] for j in np.flatnonzero(mask)]
        return Solution.from_ids(lg, ids, algorithm="exact", wall_time=time.perf_counter() - start)

    try:
        best_cost, best_mask, root_lb = search.run(warm_cost, warm_mask)
    except _Timeout as t:
        if stats is not None:
            stats.nodes = search.nodes
            if t.root_lb is not None:
                stats.root_lower_bound = Fraction(t.root_lb, den)
        raise SolverTimeout(to_solution(t.best_mask), Fraction(t.bound, den)) from None
    if stats is not None:
        stats.nodes = search.nodes
        stats.root_lower_bound = Fraction(root_lb, den)
    return to_solution(best_mask)


def brute_force_cut_sides(c: CactusGraph) -> list[frozenset[int]]:
    """Side (avoiding vertex 1) of every minimum cut, found by deleting cactus edges.

    Independent of the block decomposition: each tree edge and each pair of
    edges on one cycle is removed from a plain graph and the component
    without vertex 1 is read off.
    """
    sides = []
    base = nx.MultiGraph()
    base.add_nodes_from(range(1, c.n + 1))
    keys = [base.add_edge(e.u, e.v) for e in c.edges]
    groups: dict[int | None, list[int]] = {}
    for idx, e in enumerate(c.edges):
        groups.setdefault(e.cycle, []).append(idx)

    def side_without(removed):
        g = base.copy()
        for idx in removed:
            e = c.edges[idx]
            g.remove_edge(e.u, e.v, keys[idx])
        comps = list(nx.connected_components(g))
        assert len(comps) == 2
        return frozenset(next(s for s in comps if 1 not in s))

    for idx in groups.get(None, ()):
        sides.append(side_without([idx]))
    for cid in sorted(k for k in groups if k is not None):
        members = groups[cid]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                sides.append(side_without([members[a], members[b]]))
    return sides


def brute_force_optimal(c: CactusGraph, lg: LinkGraph, max_links: int = 28) -> Fraction:
    """Minimum augmentation cost by exhaustive include/exclude search over links."""
    links = sorted(lg.links, key=lambda l: (l.cost, l.id))
    if len(links) > max_links:
        raise TooLarge(f"{len(links)} links exceed the brute-force limit of {max_links}")
    sides = brute_force_cut_sides(c)
    full = (1 << len(sides)) - 1
    masks = []
    for l in links:
        m = 0
        for r, side in enumerate(sides):
            if (l.u in side) != (l.v in side):
                m |= 1 << r
        masks.append(m)
    suffix = [0] * (len(links) + 1)
    for i in range(len(links) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]
    if suffix[0] != full:
        raise Infeasible("some minimum cut is covered by no link")
    costs = [l.cost for l in links]
    best = [sum(costs, Fraction(0))]

    def dfs(i: int, covered: int, cost: Fraction):
        if covered == full:
            if cost < best[0]:
                best[0] = cost
            return
        if i == len(links) or cost >= best[0] or (covered | suffix[i]) != full:
            return
        dfs(i + 1, covered | masks[i], cost + costs[i])
        dfs(i + 1, covered, cost)

    dfs(0, 0, Fraction(0))
    return best[0]
