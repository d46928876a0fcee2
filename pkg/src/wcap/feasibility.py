"""Flow-based feasibility checks for removing or swapping solution links.

With k normalized to 2, tree edges get capacity 2, cycle edges capacity 1 and
links capacity 1. A solution stays an augmentation after dropping a link
(u, v) iff the u-v connectivity of cactus plus remaining links exceeds 2.
Between two distinct cactus vertices the cactus alone carries exactly 2 units,
so the check routes those first over cactus edges and then looks for one more
augmenting path that may use links.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable

from .cactus import CactusGraph, Link

TREE_CAPACITY = 2
CYCLE_CAPACITY = 1
LINK_CAPACITY = 1


class FlowNetwork:
    """Residual network over undirected edges (each edge is a pair of arcs)."""

    def __init__(self):
        self.head: list[int] = []
        self.cap: list[int] = []
        self.is_link: list[bool] = []
        self.adj: dict[int, list[int]] = {}

    def add_edge(self, a: int, b: int, capacity: int, link: bool = False) -> None:
        # arcs 2i and 2i+1 are mutual reverses; an undirected edge starts with
        # full residual capacity in both directions
        for x, y in ((a, b), (b, a)):
            self.adj.setdefault(x, []).append(len(self.head))
            self.head.append(y)
            self.cap.append(capacity)
            self.is_link.append(link)

    def augment(self, s: int, t: int, allow_links: bool) -> int:
        """Push flow along one shortest augmenting path; return the amount (0 if none)."""
        if s == t:
            return 0
        pred: dict[int, int] = {s: -1}
        queue = deque([s])
        head, cap, is_link, adj = self.head, self.cap, self.is_link, self.adj
        while queue and t not in pred:
            x = queue.popleft()
            for arc in adj.get(x, ()):
                if cap[arc] <= 0 or (is_link[arc] and not allow_links):
                    continue
                y = head[arc]
                if y not in pred:
                    pred[y] = arc
                    queue.append(y)
        if t not in pred:
            return 0
        arcs = []
        y = t
        while y != s:
            arc = pred[y]
            arcs.append(arc)
            y = head[arc ^ 1]
        amount = min(cap[a] for a in arcs)
        for a in arcs:
            cap[a] -= amount
            cap[a ^ 1] += amount
        return amount


def build_network(c: CactusGraph, links: Iterable[Link]) -> FlowNetwork:
    net = FlowNetwork()
    for e in c.edges:
        net.add_edge(e.u, e.v, TREE_CAPACITY if e.cycle is None else CYCLE_CAPACITY)
    for l in links:
        net.add_edge(l.u, l.v, LINK_CAPACITY, link=True)
    return net


def connectivity_exceeds_k(c: CactusGraph, links: Iterable[Link], u: int, v: int) -> bool:
    """True iff the u-v max flow in cactus plus ``links`` is above k."""
    if u == v:
        raise ValueError("endpoints must differ")
    net = build_network(c, links)
    flow = 0
    # at most two rounds: each cactus path carries 1 or 2 units
    while flow < TREE_CAPACITY:
        pushed = net.augment(u, v, allow_links=False)
        if not pushed:
            break
        flow += pushed
    return net.augment(u, v, allow_links=True) > 0


def is_disposable(c: CactusGraph, solution: Iterable[Link], link: Link) -> bool:
    rest = [l for l in solution if l.id != link.id]
    return connectivity_exceeds_k(c, rest, link.u, link.v)


def is_swap_valid(
    c: CactusGraph,
    solution: Iterable[Link],
    l_in: Iterable[Link],
    l_out: Iterable[Link],
) -> bool:
    """Whether ``solution - l_out + l_in`` still covers every minimum cut.

    Only cuts separating the endpoints of some removed link can lose their
    cover, so one connectivity query per removed link suffices.
    """
    l_out = list(l_out)
    if not l_out:
        return True
    out_ids = {l.id for l in l_out}
    new = [l for l in solution if l.id not in out_ids]
    new.extend(l_in)
    return all(connectivity_exceeds_k(c, new, l.u, l.v) for l in l_out)
