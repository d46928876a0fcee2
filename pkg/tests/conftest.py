from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest
from hypothesis import strategies as st

from wcap.cactus import CactusGraph, build_link_graph
from wcap.formats import parse_cactus, parse_links, parse_pi

DATA = Path(__file__).parent / "data"


def complete_links(c: CactusGraph, cost=1):
    raw = [(u, v, Fraction(cost)) for u, v in combinations(range(1, c.n + 1), 2)]
    return build_link_graph(c, raw)


def link_by_pair(lg, u, v):
    u, v = min(u, v), max(u, v)
    return next(l for l in lg if (l.u, l.v) == (u, v))


def ids_of(lg, pairs):
    return {link_by_pair(lg, u, v).id for u, v in pairs}


def ring(n: int) -> CactusGraph:
    return CactusGraph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def star(n: int) -> CactusGraph:
    return CactusGraph.from_edges(n, [(1, i) for i in range(2, n + 1)])


def read_graph(path: Path) -> tuple[int, list[tuple[int, int, int]]]:
    edges = []
    for line in path.read_text().splitlines():
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        edges.append((int(tok[0]), int(tok[1]), int(tok[2])))
    n = max(max(a, b) for a, b, _ in edges)
    return n, edges


@pytest.fixture
def fig1():
    pi = parse_pi((DATA / "fig1.pi").read_text())
    return parse_cactus((DATA / "fig1.cactus").read_text(), pi)


@pytest.fixture
def fig1_graph():
    return read_graph(DATA / "fig1.graph")


@pytest.fixture
def ring8_instance():
    c = parse_cactus((DATA / "ring8.cactus").read_text())
    lg = build_link_graph(c, parse_links((DATA / "ring8_unit.links").read_text()))
    return c, lg


def random_cactus_pairs(rng: random.Random, max_vertices: int = 12) -> tuple[int, list[tuple[int, int]]]:
    """Grow a cactus by hanging tree edges and cycles off existing vertices."""
    n = 1
    pairs = []
    while n < max_vertices:
        anchor = rng.randint(1, n)
        if rng.random() < 0.4 or max_vertices - n < 2:
            n += 1
            pairs.append((anchor, n))
        else:
            size = rng.randint(3, min(6, max_vertices - n + 1))
            ring_ = [anchor] + list(range(n + 1, n + size))
            n += size - 1
            pairs.extend((ring_[p], ring_[(p + 1) % size]) for p in range(size))
        if rng.random() < 0.15:
            break
    if n == 1:
        pairs.append((1, 2))
        n = 2
    # shuffle labels so vertex 1 is not always the first anchor
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    relabel = dict(zip(range(1, n + 1), perm))
    return n, [(relabel[a], relabel[b]) for a, b in pairs]


def random_cactus(rng: random.Random, max_vertices: int = 12) -> CactusGraph:
    n, pairs = random_cactus_pairs(rng, max_vertices)
    return CactusGraph.from_edges(n, pairs)


def random_link_graph(c: CactusGraph, rng: random.Random, density: float = 1.0, high: int = 9):
    raw = [
        (u, v, Fraction(rng.randint(1, high)))
        for u, v in combinations(range(1, c.n + 1), 2)
        if rng.random() < density
    ]
    return build_link_graph(c, raw)


@st.composite
def cacti(draw, max_vertices: int = 12):
    seed = draw(st.integers(0, 2**32 - 1))
    size = draw(st.integers(2, max_vertices))
    return random_cactus(random.Random(seed), size)


@st.composite
def instances(draw, max_vertices: int = 10, density: float = 1.0):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    c = random_cactus(rng, draw(st.integers(2, max_vertices)))
    return c, random_link_graph(c, rng, density)


# acceptance verdicts, printed once at the end of the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {verdict} {detail}")
