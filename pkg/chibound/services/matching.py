"""
Maximum-cardinality matching in general graphs.

Edmonds' augmenting-path search: a BFS forest is grown from one exposed root;
when an edge closes an odd cycle the cycle (blossom) is contracted by
relabeling the base of every vertex on it, and the search continues in the
contracted graph. An augmenting path found this way is expanded back through
the parent pointers. O(n^3) overall, deterministic for a fixed vertex order.
"""

import logging
from collections import deque

from chibound.core.graph import Graph
from chibound.models.schemas import Matching

logger = logging.getLogger(__name__)

_NONE = -1


class BlossomMatcher:
    """Single-use search state for one graph."""

    def __init__(self, g: Graph):
        self.n = g.n
        self.adj = [g.neighbors(u) for u in range(g.n)]
        self.mate = [_NONE] * g.n
        self.parent = [_NONE] * g.n
        self.base = list(range(g.n))
        self.in_tree = [False] * g.n
        self.in_blossom = [False] * g.n

    def run(self) -> list[tuple[int, int]]:
        """Return the matching as ascending (u, v) pairs with u < v."""
        self._greedy_seed()
        for root in range(self.n):
            if self.mate[root] == _NONE:
                end = self._find_augmenting_path(root)
                if end != _NONE:
                    self._augment(end)
        return [(u, self.mate[u]) for u in range(self.n) if u < self.mate[u]]

    def _greedy_seed(self) -> None:
        for u in range(self.n):
            if self.mate[u] != _NONE:
                continue
            for v in self.adj[u]:
                if self.mate[v] == _NONE:
                    self.mate[u] = v
                    self.mate[v] = u
                    break

    def _lowest_common_ancestor(self, a: int, b: int) -> int:
        seen = [False] * self.n
        while True:
            a = self.base[a]
            seen[a] = True
            if self.mate[a] == _NONE:
                break
            a = self.parent[self.mate[a]]
        while True:
            b = self.base[b]
            if seen[b]:
                return b
            b = self.parent[self.mate[b]]

    def _mark_path(self, v: int, blossom_base: int, child: int) -> None:
        # Walk from v up to the blossom base, flagging bases and re-pointing parents
        while self.base[v] != blossom_base:
            self.in_blossom[self.base[v]] = True
            self.in_blossom[self.base[self.mate[v]]] = True
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    def _find_augmenting_path(self, root: int) -> int:
        self.in_tree = [False] * self.n
        self.parent = [_NONE] * self.n
        self.base = list(range(self.n))
        self.in_tree[root] = True
        queue = deque([root])

        while queue:
            v = queue.popleft()
            for to in self.adj[v]:
                if self.base[v] == self.base[to] or self.mate[v] == to:
                    continue
                if to == root or (self.mate[to] != _NONE and self.parent[self.mate[to]] != _NONE):
                    # Odd cycle: contract the blossom
                    blossom_base = self._lowest_common_ancestor(v, to)
                    self.in_blossom = [False] * self.n
                    self._mark_path(v, blossom_base, to)
                    self._mark_path(to, blossom_base, v)
                    for i in range(self.n):
                        if self.in_blossom[self.base[i]]:
                            self.base[i] = blossom_base
                            if not self.in_tree[i]:
                                self.in_tree[i] = True
                                queue.append(i)
                elif self.parent[to] == _NONE:
                    self.parent[to] = v
                    if self.mate[to] == _NONE:
                        return to
                    self.in_tree[self.mate[to]] = True
                    queue.append(self.mate[to])
        return _NONE

    def _augment(self, end: int) -> None:
        v = end
        while v != _NONE:
            pv = self.parent[v]
            next_v = self.mate[pv]
            self.mate[v] = pv
            self.mate[pv] = v
            v = next_v


def maximum_matching(g: Graph) -> Matching:
    """
    Maximum-cardinality matching of a general (non-bipartite) graph.

    Args:
        g: Any graph; no size cap applies

    Returns:
        Matching whose edges are ascending (u, v) pairs with u < v
    """
    edges = BlossomMatcher(g).run()
    logger.debug(f"Matching of size {len(edges)} on {g!r}")
    return Matching(edges=edges)


def validate_matching(g: Graph, matching: Matching) -> bool:
    """True iff every pair is an edge of g and no vertex repeats."""
    used: set[int] = set()
    for u, v in matching.edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v or not g.has_edge(u, v):
            return False
        if u in used or v in used:
            return False
        used.update((u, v))
    return True
