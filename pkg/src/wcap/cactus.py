"""Cactus representation of all minimum cuts, its cuts, and the cactus link graph.

Vertices are numbered ``1..n``. Vertex 1 is the root: a cut is always
reported as the side that does *not* contain it. Tree edges carry implicit
weight ``k`` and cycle edges ``k/2``, so every tree edge and every pair of
edges on a common cycle is a minimum cut.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Union

import networkx as nx
import numpy as np

from .blocks import BlockTree
from .errors import Disconnected, MalformedInput, NotACactus, UnknownVertex

ROOT = 1


class Edge(NamedTuple):
    u: int
    v: int
    cycle: int | None  # None for a tree edge

    @property
    def is_tree(self) -> bool:
        return self.cycle is None


@dataclass(frozen=True)
class TreeCut:
    edge: int


@dataclass(frozen=True)
class CycleCut:
    cycle: int
    i: int
    j: int

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"cycle cut needs 0 <= i < j, got ({self.i}, {self.j})")


MinCutRef = Union[TreeCut, CycleCut]


def _orient_cycle(adj: dict[int, list[int]], verts: set[int]) -> tuple[int, ...]:
    start = min(verts)
    prev, cur = start, min(adj[start])
    seq = [start]
    while cur != start:
        seq.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return tuple(seq)


@dataclass(frozen=True)
class CactusGraph:
    """A validated cactus. Build instances with :meth:`from_edges`."""

    n: int
    edges: tuple[Edge, ...]
    cycles: tuple[tuple[int, ...], ...]
    k: int
    pi: Mapping[int, int] = field(compare=False, repr=False)

    @classmethod
    def from_edges(
        cls,
        n: int,
        pairs: Iterable[tuple[int, int]],
        k: int = 2,
        pi: Mapping[int, int] | None = None,
    ) -> CactusGraph:
        """Validate an edge list and recover its cycles.

        Cycles are the biconnected components with more than one edge. A
        doubled edge (a 2-cycle) is cut-equivalent to one tree edge and is
        stored as such.
        """
        if n < 1:
            raise MalformedInput("a cactus needs at least one vertex")
        if k < 1:
            raise MalformedInput(f"connectivity must be positive, got {k}")
        mult: Counter[tuple[int, int]] = Counter()
        for u, v in pairs:
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedInput(f"edge ({u}, {v}) outside 1..{n}")
            if u == v:
                raise MalformedInput(f"self-loop at vertex {u}")
            mult[(min(u, v), max(u, v))] += 1
        for pair, m in mult.items():
            if m > 2:
                raise NotACactus(f"{m} parallel edges between {pair}")

        g = nx.Graph()
        g.add_nodes_from(range(1, n + 1))
        g.add_edges_from(mult)
        if not nx.is_connected(g):
            raise Disconnected("cactus graph is not connected")

        tree: list[tuple[int, int]] = []
        cycles: list[tuple[int, ...]] = []
        for comp in nx.biconnected_component_edges(g):
            comp = [(min(a, b), max(a, b)) for a, b in comp]
            if len(comp) == 1:
                tree.append(comp[0])
                continue
            if any(mult[e] > 1 for e in comp):
                raise NotACactus("a doubled edge lies on a larger cycle")
            adj: dict[int, list[int]] = {}
            for a, b in comp:
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
            if len(adj) != len(comp) or any(len(nb) != 2 for nb in adj.values()):
                raise NotACactus("two cycles share an edge")
            cycles.append(_orient_cycle(adj, set(adj)))

        tree.sort()
        cycles.sort()
        edges = [Edge(a, b, None) for a, b in tree]
        for cid, cyc in enumerate(cycles):
            size = len(cyc)
            edges.extend(Edge(cyc[p], cyc[(p + 1) % size], cid) for p in range(size))

        if pi is None:
            pi = {v: v for v in range(1, n + 1)}
        else:
            pi = dict(pi)
            bad = [x for x in pi.values() if not 1 <= x <= n]
            if bad:
                raise MalformedInput(f"pi maps to unknown cactus vertices {sorted(set(bad))[:5]}")
            missing = set(range(1, n + 1)) - set(pi.values())
            if missing:
                raise MalformedInput(f"pi is not surjective, missing {sorted(missing)[:5]}")
        return cls(n, tuple(edges), tuple(cycles), k, pi)

    def edge_weight(self, idx: int) -> Fraction:
        """Implicit weight: ``k`` on tree edges, ``k/2`` on cycle edges."""
        return Fraction(self.k) if self.edges[idx].cycle is None else Fraction(self.k, 2)

    @property
    def tree_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.cycle is None]

    @cached_property
    def blocks(self) -> BlockTree:
        tree = [(e.u, e.v) for e in self.edges if e.cycle is None]
        bt = BlockTree(ROOT, tree, self.cycles)
        return bt

    @cached_property
    def _block_of(self) -> dict[tuple[str, int], int]:
        # blocks are numbered tree edges first, then cycles
        out = {}
        for bid, idx in enumerate(self.tree_edges):
            out[("t", idx)] = bid
        base = len(out)
        for cid in range(len(self.cycles)):
            out[("c", cid)] = base + cid
        return out

    @cached_property
    def min_cuts(self) -> tuple[MinCutRef, ...]:
        cuts: list[MinCutRef] = [TreeCut(i) for i in self.tree_edges]
        for cid, cyc in enumerate(self.cycles):
            size = len(cyc)
            cuts.extend(CycleCut(cid, i, j) for i in range(size) for j in range(i + 1, size))
        return tuple(cuts)

    def cut_interval(self, cut: MinCutRef) -> tuple[int, int]:
        """Half-open preorder interval of the side of ``cut`` avoiding the root."""
        bt = self.blocks
        if isinstance(cut, TreeCut):
            e = self.edges[cut.edge]
            if e.cycle is not None:
                raise ValueError(f"edge {cut.edge} is a cycle edge")
            child = e.v if bt.depth[e.v] > bt.depth[e.u] else e.u
            return bt.tin[child], bt.tout[child]
        size = len(self.cycles[cut.cycle])
        if cut.j >= size:
            raise ValueError(f"cycle {cut.cycle} has only {size} edges")
        bid = self._block_of[("c", cut.cycle)]
        off = bt.offsets[bid]
        i, j = cut.i, cut.j
        if i < off <= j:
            first, last = (j + 1 - off) % size, (i - off) % size
        else:
            first, last = (i + 1 - off) % size, (j - off) % size
        return bt.arc_interval(bid, first, last)

    @cached_property
    def cut_intervals(self) -> np.ndarray:
        """``(#cuts, 2)`` array of side intervals aligned with :attr:`min_cuts`."""
        arr = np.array([self.cut_interval(c) for c in self.min_cuts], dtype=np.int64)
        return arr.reshape(-1, 2)

    def singleton_cut_vertices(self) -> frozenset[int]:
        """Vertices v for which {v} is itself a minimum cut.

        That is a leaf hanging off one tree edge, or a vertex that lies on a
        single cycle and on nothing else.
        """
        deg: Counter[int] = Counter()
        on_cycle: Counter[int] = Counter()
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
            if e.cycle is not None:
                on_cycle[e.u] += 1
                on_cycle[e.v] += 1
        out = set()
        for v in range(1, self.n + 1):
            if deg[v] == 1 and on_cycle[v] == 0:
                out.add(v)
            elif deg[v] == 2 and on_cycle[v] == 2:
                out.add(v)
        return frozenset(out)


@dataclass(frozen=True)
class Link:
    id: int
    u: int
    v: int
    cost: Fraction
    orig_u: int
    orig_v: int


@dataclass(frozen=True)
class LinkGraph:
    """Deduplicated links on cactus vertices, ordered by id."""

    links: tuple[Link, ...]
    adjacency: Mapping[int, tuple[int, ...]] = field(init=False, compare=False, repr=False)
    _by_id: Mapping[int, Link] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        links = tuple(sorted(self.links, key=lambda l: l.id))
        object.__setattr__(self, "links", links)
        by_id = {l.id: l for l in links}
        if len(by_id) != len(links):
            raise ValueError("duplicate link ids")
        adj: dict[int, list[int]] = {}
        for l in links:
            adj.setdefault(l.u, []).append(l.id)
            adj.setdefault(l.v, []).append(l.id)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "adjacency", {v: tuple(ids) for v, ids in adj.items()})

    def __len__(self) -> int:
        return len(self.links)

    def __iter__(self):
        return iter(self.links)

    def __contains__(self, link_id: int) -> bool:
        return link_id in self._by_id

    def __getitem__(self, link_id: int) -> Link:
        return self._by_id[link_id]

    def ids(self) -> list[int]:
        return [l.id for l in self.links]

    def cost(self, ids: Iterable[int]) -> Fraction:
        return sum((self._by_id[i].cost for i in ids), Fraction(0))

    def subset(self, ids: Iterable[int]) -> LinkGraph:
        return LinkGraph(tuple(self._by_id[i] for i in set(ids)))

    def incident(self, v: int) -> tuple[int, ...]:
        return self.adjacency.get(v, ())


@dataclass(frozen=True)
class Solution:
    link_ids: frozenset[int]
    total_cost: Fraction
    algorithm: str = ""
    seed: int | None = None
    wall_time: float | None = field(default=None, compare=False)

    @classmethod
    def from_ids(cls, lg: LinkGraph, ids: Iterable[int], **meta) -> Solution:
        ids = frozenset(ids)
        return cls(ids, lg.cost(ids), **meta)

    def __len__(self) -> int:
        return len(self.link_ids)

    def sorted_ids(self) -> list[int]:
        return sorted(self.link_ids)


def enumerate_min_cuts(c: CactusGraph) -> list[MinCutRef]:
    return list(c.min_cuts)


def cut_sides(c: CactusGraph, cut: MinCutRef) -> frozenset[int]:
    lo, hi = c.cut_interval(cut)
    return frozenset(c.blocks.order[lo:hi])


def cuts_link(c: CactusGraph, cut: MinCutRef, link: Link) -> bool:
    lo, hi = c.cut_interval(cut)
    tin = c.blocks.tin
    return (lo <= tin[link.u] < hi) != (lo <= tin[link.v] < hi)


def covered_cuts(c: CactusGraph, link: Link) -> int:
    """Number of minimum cuts whose sides separate the link's endpoints."""
    return c.blocks.covered(link.u, link.v)


def build_link_graph(
    c: CactusGraph,
    raw_links: Sequence[tuple[int, int, object]],
    ids: Sequence[int] | None = None,
) -> LinkGraph:
    """Map raw links through pi, drop self-loops, keep the cheapest per pair.

    Ties between equally cheap parallel links go to the smallest id; ids
    default to the position in ``raw_links``.
    """
    if ids is None:
        ids = range(len(raw_links))
    best: dict[tuple[int, int], Link] = {}
    pi = c.pi
    for lid, (a, b, cost) in zip(ids, raw_links):
        try:
            u, v = pi[a], pi[b]
        except KeyError as exc:
            raise UnknownVertex(f"link {lid} uses unknown vertex {exc.args[0]}") from None
        if u == v:
            continue
        cost = Fraction(cost)
        if cost < 0:
            raise MalformedInput(f"link {lid} has negative cost {cost}")
        if u > v:
            u, v, a, b = v, u, b, a
        cand = Link(lid, u, v, cost, a, b)
        cur = best.get((u, v))
        if cur is None or (cost, lid) < (cur.cost, cur.id):
            best[(u, v)] = cand
    return LinkGraph(tuple(best.values()))


def uncovered_cuts(c: CactusGraph, lg: LinkGraph, ids: Iterable[int]) -> np.ndarray:
    """Indices into ``c.min_cuts`` of cuts that no link in ``ids`` covers."""
    ivs = c.cut_intervals
    if len(ivs) == 0:
        return np.zeros(0, dtype=np.int64)
    tin = c.blocks.tin
    ids = list(ids)
    if not ids:
        return np.arange(len(ivs))
    tu = np.array([tin[lg[i].u] for i in ids], dtype=np.int64)
    tv = np.array([tin[lg[i].v] for i in ids], dtype=np.int64)
    covered = np.zeros(len(ivs), dtype=bool)
    chunk = max(1, 2_000_000 // len(ids))
    for start in range(0, len(ivs), chunk):
        lo = ivs[start : start + chunk, 0:1]
        hi = ivs[start : start + chunk, 1:2]
        in_u = (lo <= tu) & (tu < hi)
        in_v = (lo <= tv) & (tv < hi)
        covered[start : start + chunk] = (in_u != in_v).any(axis=1)
    return np.flatnonzero(~covered)


def validate_solution(c: CactusGraph, lg: LinkGraph, s: Solution | Iterable[int]) -> bool:
    """Reference check: every minimum cut is covered by some solution link."""
    ids = s.link_ids if isinstance(s, Solution) else s
    return len(uncovered_cuts(c, lg, ids)) == 0


def map_solution_back(s: Solution, lg: LinkGraph) -> list[tuple[int, int, Fraction]]:
    """Original-graph endpoints and cost of every solution link, by link id."""
    return [(lg[i].orig_u, lg[i].orig_v, lg[i].cost) for i in s.sorted_ids()]
