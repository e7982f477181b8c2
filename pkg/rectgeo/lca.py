"""Static O(1) LCA via Euler tour + sparse table.

Pre-processing: O(n log n). Query: O(1).
"""

from typing import List, Sequence

import numpy as np


class EulerLCA:
    """Builds Euler tour & sparse table for constant-time LCA queries on a rooted tree."""

    __slots__ = ("first_occ", "euler", "depths", "st", "log")

    def __init__(self, parent: Sequence[int], depth: Sequence[int], root: int = 0):
        """
        Args:
            parent: Parent node per node, -1 at the root
            depth: Hop distance from the root per node
            root: Root node
        """
        n = len(parent)
        children: List[List[int]] = [[] for _ in range(n)]
        for child, par in enumerate(parent):
            if par >= 0:
                children[par].append(child)
        for row in children:
            row.sort()

        euler: List[int] = []
        first = np.full(n, -1, dtype=np.int64)
        # iterative DFS; children visited in increasing id
        stack = [(root, 0)]
        while stack:
            u, i = stack.pop()
            if first[u] < 0:
                first[u] = len(euler)
            euler.append(u)
            if i < len(children[u]):
                stack.append((u, i + 1))
                stack.append((children[u][i], 0))

        self.euler = np.asarray(euler, dtype=np.int64)
        self.first_occ = first
        self.depths = np.asarray(depth, dtype=np.int64)[self.euler]

        # Sparse table over depths storing the index of the minimum in each range
        m = len(self.euler)
        self.log = np.zeros(m + 1, dtype=np.int64)
        if m > 1:
            self.log[2:] = np.floor(np.log2(np.arange(2, m + 1))).astype(np.int64)
        k_max = int(self.log[m]) + 1
        st = np.empty((k_max, m), dtype=np.int64)
        st[0] = np.arange(m)
        for k in range(1, k_max):
            half = 1 << (k - 1)
            width = m - (1 << k) + 1
            left = st[k - 1, :width]
            right = st[k - 1, half:half + width]
            st[k, :width] = np.where(self.depths[left] <= self.depths[right], left, right)
            st[k, width:] = st[k - 1, width:]
        self.st = st

    def lca(self, u: int, v: int) -> int:
        l, r = int(self.first_occ[u]), int(self.first_occ[v])
        if l > r:
            l, r = r, l
        j = int(self.log[r - l + 1])
        left = self.st[j, l]
        right = self.st[j, r - (1 << j) + 1]
        return int(self.euler[left] if self.depths[left] <= self.depths[right] else self.euler[right])

    @property
    def table_entries(self) -> int:
        """Entries held by the tour, depth copy and sparse table."""
        return int(self.euler.size + self.depths.size + self.st.size + self.log.size)
