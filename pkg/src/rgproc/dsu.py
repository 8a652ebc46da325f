"""Union-find over vertices 1..n with size bookkeeping and merge reporting.

State lives in numpy arrays so the compiled step loops can drive the same
structure.  Besides parent/size, each component keeps a circular successor
ring of its members: merging splices two rings in O(1), and any component's
members can be enumerated from its root without touching parent pointers.
"""

from dataclasses import dataclass

import numpy as np

from .engine import dsu_find, dsu_link, dsu_pick_winner

_M_NCOMP = 0
_M_LARGEST = 1
_M_NEDGES = 2


@dataclass(frozen=True)
class MergeOutcome:
    """Report of one union attempt; roots and sizes are pre-merge values."""

    merged: bool
    root_a: int
    root_b: int
    size_a: int
    size_b: int
    new_root: int
    new_size: int


class Partition:
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.parent = np.arange(n + 1, dtype=np.int32)
        self.csize = np.ones(n + 1, dtype=np.int32)
        self.ring = np.arange(n + 1, dtype=np.int32)  # each vertex its own cycle
        self.meta = np.zeros(4, dtype=np.int64)
        self.meta[_M_NCOMP] = n
        self.meta[_M_LARGEST] = 1

    def _check(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range [1, {self.n}]")

    def find(self, v: int) -> int:
        self._check(v)
        return int(dsu_find(self.parent, v))

    def union(self, u: int, v: int) -> MergeOutcome:
        self._check(u)
        self._check(v)
        ra = int(dsu_find(self.parent, u))
        rb = int(dsu_find(self.parent, v))
        if ra == rb:
            s = int(self.csize[ra])
            return MergeOutcome(False, ra, rb, s, s, ra, s)
        sa = int(self.csize[ra])
        sb = int(self.csize[rb])
        win = int(dsu_pick_winner(ra, rb, sa, sb))
        dsu_link(self.parent, self.csize, self.ring, ra, rb, win)
        ns = sa + sb
        self.meta[_M_NCOMP] -= 1
        self.meta[_M_NEDGES] += 1
        if ns > self.meta[_M_LARGEST]:
            self.meta[_M_LARGEST] = ns
        return MergeOutcome(True, ra, rb, sa, sb, win, ns)

    def component_size(self, v: int) -> int:
        return int(self.csize[self.find(v)])

    def largest_size(self) -> int:
        return int(self.meta[_M_LARGEST])

    def component_count(self) -> int:
        return int(self.meta[_M_NCOMP])

    @property
    def edge_count(self) -> int:
        return int(self.meta[_M_NEDGES])

    def bump_edge_count(self) -> None:
        # fresh edge inside an existing component; see process step functions
        self.meta[_M_NEDGES] += 1

    def members(self, v: int) -> list:
        """All vertices in v's component, via the ring (unsorted)."""
        self._check(v)
        out = [v]
        w = int(self.ring[v])
        while w != v:
            out.append(w)
            w = int(self.ring[w])
        return out


def new_partition(n: int) -> Partition:
    return Partition(n)
