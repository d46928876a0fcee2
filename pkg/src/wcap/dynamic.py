"""A cactus that shrinks as links are added.

Adding a link covers exactly the minimum cuts on the path between its
endpoints. Contracting that path keeps the structure a cactus whose cuts are
the still-uncovered ones: tree edges on the path collapse, and every cycle
entered at ``a`` and left at ``b`` is pinched at ``a ~ b`` into two smaller
cycles. Original vertex ids are tracked with a disjoint-set forest.
"""

from __future__ import annotations

import copy
from math import comb

from .blocks import TREE, BlockTree
from .cactus import ROOT, CactusGraph


class DisjointSet:
    __slots__ = ("parent", "size")

    def __init__(self, items=()):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


class DynamicCactus:
    def __init__(self, base: CactusGraph):
        self.base = base
        self.dsu = DisjointSet(range(1, base.n + 1))
        self.live_tree_edges: set[tuple[int, int]] = {
            (e.u, e.v) for e in base.edges if e.cycle is None
        }
        self.live_cycles: list[list[int]] = [list(c) for c in base.cycles]
        self.remaining_cut_count = len(self.live_tree_edges) + sum(
            comb(len(c), 2) for c in self.live_cycles
        )
        self._blocks: BlockTree | None = base.blocks

    @classmethod
    def from_cactus(cls, base: CactusGraph) -> DynamicCactus:
        return cls(base)

    def clone(self) -> DynamicCactus:
        other = copy.copy(self)
        other.dsu = copy.deepcopy(self.dsu)
        other.live_tree_edges = set(self.live_tree_edges)
        other.live_cycles = [list(c) for c in self.live_cycles]
        return other

    @property
    def blocks(self) -> BlockTree:
        if self._blocks is None:
            self._blocks = BlockTree(self.dsu.find(ROOT), self.live_tree_edges, self.live_cycles)
        return self._blocks

    def remaining_cuts(self) -> int:
        return self.remaining_cut_count

    def is_fully_augmented(self) -> bool:
        return self.remaining_cut_count == 0

    def find(self, v: int) -> int:
        return self.dsu.find(v)

    def covered(self, u: int, v: int) -> int:
        """Uncovered cuts that a link between original cactus vertices u, v would cover."""
        ru, rv = self.dsu.find(u), self.dsu.find(v)
        if ru == rv:
            return 0
        return self.blocks.covered(ru, rv)

    def add_link(self, u: int, v: int) -> int:
        """Contract the u-v path; return how many uncovered cuts this covers."""
        ru, rv = self.dsu.find(u), self.dsu.find(v)
        if ru == rv:
            return 0
        bt = self.blocks
        path = bt.path_blocks(ru, rv)
        cycle_ids = {}
        base_tree = len(bt.seqs) - len(self.live_cycles)
        dropped_tree: list[tuple[int, int]] = []
        merges: list[tuple[int, int]] = []
        for bid, p, q in path:
            seq = bt.seqs[bid]
            if bt.kinds[bid] == TREE:
                a, b = seq
                dropped_tree.append((a, b))
                merges.append((a, b))
            else:
                cycle_ids[bid - base_tree] = (seq, min(p, q), max(p, q))
                merges.append((seq[p], seq[q]))

        before = self.remaining_cut_count
        for a, b in dropped_tree:
            self.live_tree_edges.discard((a, b) if (a, b) in self.live_tree_edges else (b, a))
            self.remaining_cut_count -= 1

        new_cycles: list[list[int]] = []
        for cid, cyc in enumerate(self.live_cycles):
            if cid not in cycle_ids:
                new_cycles.append(cyc)
                continue
            seq, i, j = cycle_ids[cid]
            self.remaining_cut_count -= comb(len(seq), 2)
            for arc in (seq[i:j], seq[j:] + seq[:i]):
                # arc[0] is merged with the vertex closing the arc
                if len(arc) == 2:
                    self.live_tree_edges.add((arc[0], arc[1]))
                    self.remaining_cut_count += 1
                elif len(arc) >= 3:
                    new_cycles.append(arc)
                    self.remaining_cut_count += comb(len(arc), 2)

        for a, b in merges:
            self.dsu.union(a, b)
        find = self.dsu.find
        self.live_tree_edges = {(find(a), find(b)) for a, b in self.live_tree_edges}
        self.live_cycles = [[find(x) for x in cyc] for cyc in new_cycles]
        self._blocks = None
        return before - self.remaining_cut_count

    def add_link_and_contract(self, link) -> int:
        return self.add_link(link.u, link.v)

    def as_cactus(self) -> tuple[CactusGraph, dict[int, int]]:
        """The live structure as a standalone cactus, plus representative -> new id."""
        reps = sorted({self.dsu.find(v) for v in range(1, self.base.n + 1)})
        root = self.dsu.find(ROOT)
        reps.remove(root)
        reps.insert(0, root)
        relabel = {r: i + 1 for i, r in enumerate(reps)}
        pairs = [(relabel[a], relabel[b]) for a, b in self.live_tree_edges]
        for cyc in self.live_cycles:
            size = len(cyc)
            pairs.extend((relabel[cyc[p]], relabel[cyc[(p + 1) % size]]) for p in range(size))
        return CactusGraph.from_edges(len(reps), pairs, self.base.k), relabel
