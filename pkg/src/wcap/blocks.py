"""Rooted block decomposition of a cactus.

Every block is either a tree edge or a simple cycle. Rooting the cactus at a
vertex turns the blocks into a tree: each block has a *top* vertex (the one
closest to the root) and its remaining vertices hang below it at positions
``1 .. len-1``. A preorder numbering in which the children of a block are
visited in cycle order makes every minimum-cut side a contiguous interval,
which gives O(1) cut membership tests and O(depth) coverage counts.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence

TREE = -1


class BlockTree:
    __slots__ = (
        "root",
        "kinds",
        "seqs",
        "offsets",
        "top",
        "up",
        "depth",
        "tin",
        "tout",
        "order",
    )

    def __init__(
        self,
        root: int,
        tree_edges: Iterable[tuple[int, int]],
        cycles: Iterable[Sequence[int]],
    ) -> None:
        self.root = root
        # kinds[b] is TREE for a tree edge, else the cycle length
        self.kinds: list[int] = []
        self.seqs: list[list[int]] = []
        self.offsets: list[int] = []
        incident: dict[int, list[int]] = defaultdict(list)
        for a, b in tree_edges:
            bid = len(self.seqs)
            self.kinds.append(TREE)
            self.seqs.append([a, b])
            self.offsets.append(0)
            incident[a].append(bid)
            incident[b].append(bid)
        for cyc in cycles:
            bid = len(self.seqs)
            self.kinds.append(len(cyc))
            self.seqs.append(list(cyc))
            self.offsets.append(0)
            for x in cyc:
                incident[x].append(bid)

        self.top: list[int] = [-1] * len(self.seqs)
        self.up: dict[int, tuple[int, int]] = {}
        self.depth: dict[int, int] = {root: 0}
        self.tin: dict[int, int] = {}
        self.tout: dict[int, int] = {}
        self.order: list[int] = []

        def children(x: int):
            for bid in incident.get(x, ()):
                if self.top[bid] != -1:
                    continue
                self.top[bid] = x
                seq = self.seqs[bid]
                off = seq.index(x)
                if off:
                    seq[:] = seq[off:] + seq[:off]
                self.offsets[bid] = off
                d = self.depth[x] + 1
                for pos in range(1, len(seq)):
                    y = seq[pos]
                    self.up[y] = (bid, pos)
                    self.depth[y] = d
                for pos in range(1, len(seq)):
                    yield seq[pos]

        self.tin[root] = 0
        self.order.append(root)
        stack = [(root, children(root))]
        while stack:
            x, it = stack[-1]
            y = next(it, None)
            if y is None:
                self.tout[x] = len(self.order)
                stack.pop()
                continue
            self.tin[y] = len(self.order)
            self.order.append(y)
            stack.append((y, children(y)))

    def __len__(self) -> int:
        return len(self.order)

    def path_blocks(self, u: int, v: int) -> list[tuple[int, int, int]]:
        """Blocks on the u-v path as ``(block, pos_u, pos_v)`` with pos_u != pos_v.

        Positions are relative to the block's top (position 0); a vertex that
        lies outside the block's lower part is reported at position 0.
        """
        out = []
        a, b = u, v
        depth, up, top = self.depth, self.up, self.top
        while a != b:
            da, db = depth[a], depth[b]
            if da == db:
                ba, pa = up[a]
                bb, pb = up[b]
                if ba == bb:
                    out.append((ba, pa, pb))
                    break
                out.append((ba, pa, 0))
                out.append((bb, 0, pb))
                a, b = top[ba], top[bb]
            elif da > db:
                ba, pa = up[a]
                out.append((ba, pa, 0))
                a = top[ba]
            else:
                bb, pb = up[b]
                out.append((bb, 0, pb))
                b = top[bb]
        return out

    def block_coverage(self, bid: int, p: int, q: int) -> int:
        size = self.kinds[bid]
        if size == TREE:
            return 1
        d = abs(p - q)
        return d * (size - d)

    def covered(self, u: int, v: int) -> int:
        """Number of minimum cuts separating u and v."""
        total = 0
        for bid, p, q in self.path_blocks(u, v):
            total += self.block_coverage(bid, p, q)
        return total

    def arc_interval(self, bid: int, first: int, last: int) -> tuple[int, int]:
        """Preorder interval of the block positions ``first..last`` (1-based, no top)."""
        seq = self.seqs[bid]
        return self.tin[seq[first]], self.tout[seq[last]]
