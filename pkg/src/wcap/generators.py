"""Instance generators and brute-force minimum-cut oracles.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence`` with a
purpose tag, so the structure stream and the cost stream of one seed never
interfere and results are identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .cactus import CactusGraph, LinkGraph, build_link_graph, cut_sides, enumerate_min_cuts
from .errors import InvalidParams, TooLarge

STRUCTURE, COSTS, EXPANSION = 1, 2, 3
MAX_POISSON_RESAMPLES = 1000

DISTRIBUTIONS = {
    "u2": (1, 2),
    "u9": (1, 9),
    "u99": (1, 99),
    "u100000": (1, 100_000),
}


def rng_for(seed: int, purpose: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise InvalidParams(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(purpose,))))


@dataclass(frozen=True)
class CostDistribution:
    """Uniform integer costs on ``low..high``, optionally divided by the largest drawn cost."""

    low: int
    high: int
    scale_to_unit: bool = True

    @classmethod
    def named(cls, name: str, scale_to_unit: bool = True) -> CostDistribution:
        try:
            low, high = DISTRIBUTIONS[name]
        except KeyError:
            raise InvalidParams(f"unknown distribution {name!r}; choose from {sorted(DISTRIBUTIONS)}") from None
        return cls(low, high, scale_to_unit)

    def draw(self, rng: np.random.Generator, size: int) -> list[Fraction]:
        if self.low < 1 or self.high < self.low:
            raise InvalidParams(f"bad cost range {self.low}..{self.high}")
        raw = [int(x) for x in rng.integers(self.low, self.high + 1, size=size)]
        if self.scale_to_unit and raw:
            top = max(raw)
            return [Fraction(x, top) for x in raw]
        return [Fraction(x) for x in raw]


def generate_cactus(n: int, cycles: int, seed: int) -> CactusGraph:
    """Random cactus made of ``cycles`` cycles on exactly ``n`` vertices.

    The first cycle has at least 3 vertices; each later one reuses one
    existing vertex and adds at least 2 new ones. Cycle sizes are Poisson
    around n/cycles, redrawn until the remaining cycles still fit.
    """
    if cycles < 1 or n <= cycles or n < 2 * cycles + 1:
        raise InvalidParams(f"cannot build {cycles} cycles on {n} vertices")
    rng = rng_for(seed, STRUCTURE)
    mean = n / cycles
    pairs: list[tuple[int, int]] = []
    used = 0
    for i in range(cycles):
        remaining = n - used
        lo_new = 3 if i == 0 else 2
        later = cycles - i - 1
        hi_new = remaining - 2 * later
        if later == 0:
            new = remaining
        else:
            for _ in range(MAX_POISSON_RESAMPLES):
                size = int(rng.poisson(mean))
                new = size if i == 0 else size - 1
                if lo_new <= new <= hi_new:
                    break
            else:
                new = min(max(new, lo_new), hi_new)
        fresh = list(range(used + 1, used + new + 1))
        if i == 0:
            ring = fresh
        else:
            anchor = int(rng.integers(1, used + 1))
            ring = [anchor] + fresh
        pairs.extend((ring[p], ring[(p + 1) % len(ring)]) for p in range(len(ring)))
        used += new
    return CactusGraph.from_edges(n, pairs, 2)


def generate_special(kind: str, n: int, k: int = 2) -> CactusGraph:
    if kind == "cycle":
        if n < 3:
            raise InvalidParams("a cycle needs at least 3 vertices")
        pairs = [(i, i % n + 1) for i in range(1, n + 1)]
    elif kind == "star":
        if n < 2:
            raise InvalidParams("a star needs at least 2 vertices")
        pairs = [(1, i) for i in range(2, n + 1)]
    else:
        raise InvalidParams(f"unknown special kind {kind!r}")
    return CactusGraph.from_edges(n, pairs, k)


def complete_raw_links(c: CactusGraph, costs) -> list[tuple[int, int, Fraction]]:
    pairs = list(combinations(range(1, c.n + 1), 2))
    return [(u, v, cost) for (u, v), cost in zip(pairs, costs)]


def generate_raw_costs(c: CactusGraph, dist: CostDistribution, seed: int) -> list[tuple[int, int, Fraction]]:
    """Complete link set in lexicographic pair order with i.i.d. costs."""
    m = c.n * (c.n - 1) // 2
    return complete_raw_links(c, dist.draw(rng_for(seed, COSTS), m))


def generate_link_costs(c: CactusGraph, dist: CostDistribution, seed: int) -> LinkGraph:
    return build_link_graph(c, generate_raw_costs(c, dist, seed))


def expand_cactus_to_graph(
    c: CactusGraph,
    seed: int,
    gadget_probability: float = 0.5,
    max_gadgets: int | None = None,
) -> tuple[int, list[tuple[int, int, int]], dict[int, int]]:
    """A graph whose minimum cuts are exactly those of the cactus.

    Each cactus vertex stays a single vertex or becomes a K4 (3-edge-connected,
    so it adds no new minimum cut). A tree edge becomes two unit edges between
    distinct gadget vertices on each side, a cycle edge a single unit edge.
    Parallel edges are merged into weights. Returns ``(n, edges, pi)``.
    """
    if c.k != 2:
        raise InvalidParams("graph expansion supports only k = 2")
    rng = rng_for(seed, EXPANSION)
    members: dict[int, list[int]] = {}
    pi: dict[int, int] = {}
    weights: dict[tuple[int, int], int] = {}
    nxt = 1
    gadgets = 0

    def add(a, b, w=1):
        key = (min(a, b), max(a, b))
        weights[key] = weights.get(key, 0) + w

    for v in range(1, c.n + 1):
        size = 4 if rng.random() < gadget_probability else 1
        if size == 4:
            if max_gadgets is not None and gadgets >= max_gadgets:
                size = 1
            else:
                gadgets += 1
        members[v] = list(range(nxt, nxt + size))
        for x in members[v]:
            pi[x] = v
        nxt += size
        for a, b in combinations(members[v], 2):
            add(a, b)

    def ends(v, count):
        group = members[v]
        if len(group) == 1:
            return group * count
        picks = rng.choice(len(group), size=count, replace=False)
        return [group[int(p)] for p in picks]

    for e in c.edges:
        count = 2 if e.cycle is None else 1
        for a, b in zip(ends(e.u, count), ends(e.v, count)):
            add(a, b)
    edges = [(a, b, w) for (a, b), w in sorted(weights.items())]
    return nxt - 1, edges, pi


def enumerate_min_cuts_brute_force(
    n: int, edges: list[tuple[int, int, int]], max_vertices: int = 16
) -> tuple[int, set[frozenset[int]]]:
    """Minimum cut weight and all minimum cuts, each as the side without vertex 1."""
    if n > max_vertices:
        raise TooLarge(f"{n} vertices exceed the brute-force limit of {max_vertices}")
    if n < 2:
        return 0, set()
    masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
    # vertex 1 always sits outside; bit i encodes vertex i + 2

    def side(v):
        return np.zeros_like(masks) if v == 1 else (masks >> (v - 2)) & 1

    weight = np.zeros_like(masks)
    for a, b, wt in edges:
        weight += wt * (side(a) != side(b))
    best = int(weight.min())
    found = {
        frozenset(i + 2 for i in range(n - 1) if int(m) >> i & 1)
        for m in masks[weight == best]
    }
    return best, found


def verify_cactus_representation(
    n: int,
    edges: list[tuple[int, int, int]],
    c: CactusGraph,
    pi: dict[int, int],
    max_vertices: int = 16,
) -> bool:
    """Whether the cactus cuts, pulled back through pi, are exactly the graph's minimum cuts."""
    _, graph_cuts = enumerate_min_cuts_brute_force(n, edges, max_vertices)
    preimage: dict[int, set[int]] = {}
    for x, cv in pi.items():
        preimage.setdefault(cv, set()).add(x)
    everyone = frozenset(range(1, n + 1))
    pulled = set()
    for cut in enumerate_min_cuts(c):
        side = frozenset().union(*(preimage.get(v, set()) for v in cut_sides(c, cut)))
        if 1 in side:
            side = everyone - side
        pulled.add(side)
    if len(pulled) != len(enumerate_min_cuts(c)):
        return False
    return pulled == graph_cuts
