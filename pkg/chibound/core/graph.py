"""
Immutable simple undirected graph over packed adjacency bitsets.

Vertices are 0..n-1. Row u is an int whose bit v is set iff uv is an edge, so
adjacency queries are a shift and a mask. Graph values never change after
construction and are safe to pass between worker processes.
"""

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from chibound.core.errors import GraphFormatError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def list_to_bits(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@lru_cache(maxsize=128)
def pair_order(n: int) -> tuple[tuple[int, int], ...]:
    """
    Vertex pairs in column-major upper-triangle order.

    (0,1), (0,2), (1,2), (0,3), ... Bit i of an edge mask is pair i; this is
    the graph6 bit order and the enumeration counter order.
    """
    return tuple((u, v) for v in range(1, n) for u in range(v))


class Graph:
    """Simple undirected graph with O(1) adjacency queries."""

    __slots__ = ("_n", "_rows", "_m")

    def __init__(self, n: int, rows: Sequence[int] | None = None):
        """
        Build a graph from adjacency rows, validating symmetry and range.

        Args:
            n: Vertex count
            rows: rows[u] is the neighbour bitset of u (default: no edges)
        """
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        rows = tuple(rows) if rows is not None else (0,) * n
        if len(rows) != n:
            raise GraphFormatError(f"expected {n} adjacency rows, got {len(rows)}")

        full = (1 << n) - 1
        for u, row in enumerate(rows):
            if row < 0 or row & ~full:
                raise GraphFormatError(f"row {u} references a vertex >= {n}")
            if (row >> u) & 1:
                raise GraphFormatError(f"self-loop at vertex {u}")
            for v in iter_bits(row):
                if not (rows[v] >> u) & 1:
                    raise GraphFormatError(f"asymmetric adjacency between {u} and {v}")

        self._init(n, rows)

    def _init(self, n: int, rows: tuple[int, ...]) -> None:
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_m", sum(r.bit_count() for r in rows) // 2)

    @classmethod
    def _trusted(cls, n: int, rows: tuple[int, ...]) -> "Graph":
        """Skip validation for rows that are symmetric by construction."""
        graph = object.__new__(cls)
        graph._init(n, rows)
        return graph

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        return cls._trusted(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph from an edge list; duplicates collapse."""
        if n < 0:
            raise GraphFormatError(f"vertex count must be non-negative, got {n}")
        rows = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls._trusted(n, tuple(rows))

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "Graph":
        """Build the graph whose edge set is the set bits of mask (pair_order)."""
        pairs = pair_order(n)
        if mask < 0 or mask >> len(pairs):
            raise GraphFormatError(f"edge mask out of range for n={n}")
        rows = [0] * n
        while mask:
            low = mask & -mask
            u, v = pairs[low.bit_length() - 1]
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            mask ^= low
        return cls._trusted(n, tuple(rows))

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return self._m

    @property
    def rows(self) -> tuple[int, ...]:
        return self._rows

    @property
    def full_mask(self) -> int:
        return (1 << self._n) - 1

    def vertices(self) -> range:
        return range(self._n)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self._rows[u] >> v) & 1)

    def neighbor_mask(self, u: int) -> int:
        return self._rows[u]

    def neighbors(self, u: int) -> list[int]:
        """N(u) in ascending order."""
        return bits_to_list(self._rows[u])

    def closed_neighbors(self, u: int) -> list[int]:
        """N(u) + u in ascending order."""
        return bits_to_list(self._rows[u] | (1 << u))

    def degree(self, u: int) -> int:
        return self._rows[u].bit_count()

    @property
    def max_degree(self) -> int:
        return max((r.bit_count() for r in self._rows), default=0)

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ascending (u, v) pairs with u < v."""
        return [
            (u, v) for u in range(self._n) for v in iter_bits(self._rows[u] >> (u + 1) << (u + 1))
        ]

    def non_edges(self) -> list[tuple[int, int]]:
        """Non-adjacent pairs (u, v), u < v, in lexicographic order."""
        full = self.full_mask
        result = []
        for u in range(self._n):
            missing = full & ~self._rows[u] & ~((1 << (u + 1)) - 1)
            result.extend((u, v) for v in iter_bits(missing))
        return result

    def is_complete(self) -> bool:
        return self._m == self._n * (self._n - 1) // 2

    def is_clique(self, vertices: Iterable[int]) -> bool:
        mask = list_to_bits(vertices)
        return all((self._rows[u] | (1 << u)) & mask == mask for u in iter_bits(mask))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = list_to_bits(vertices)
        return all(not self._rows[u] & mask for u in iter_bits(mask))

    @property
    def edge_mask(self) -> int:
        """Edge set as a pair_order bitmask (inverse of from_edge_mask)."""
        mask = 0
        for i, (u, v) in enumerate(pair_order(self._n)):
            if (self._rows[u] >> v) & 1:
                mask |= 1 << i
        return mask

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self._n, self._rows))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def __reduce__(self):
        return (_rebuild, (self._n, self._rows))


def _rebuild(n: int, rows: tuple[int, ...]) -> Graph:
    return Graph._trusted(n, rows)


# ============================================================================
# Combinators
# ============================================================================

def complement(g: Graph) -> Graph:
    """Graph with edge uv iff g lacks it (u != v)."""
    full = g.full_mask
    rows = tuple(full & ~row & ~(1 << u) for u, row in enumerate(g.rows))
    return Graph._trusted(g.n, rows)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    """Vertex-disjoint copies of g1 then g2 (g2 relabeled by +g1.n)."""
    shift = g1.n
    rows = g1.rows + tuple(row << shift for row in g2.rows)
    return Graph._trusted(g1.n + g2.n, rows)


def join(g1: Graph, g2: Graph) -> Graph:
    """Disjoint union of g1 and g2 plus every cross edge."""
    shift = g1.n
    low = (1 << g1.n) - 1
    high = ((1 << g2.n) - 1) << shift
    rows = tuple(row | high for row in g1.rows) + tuple((row << shift) | low for row in g2.rows)
    return Graph._trusted(g1.n + g2.n, rows)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """
    Induced subgraph on vertices, relabeled 0..k-1 in ascending original order.

    Raises:
        GraphFormatError: if a vertex is out of range
    """
    order = sorted(set(vertices))
    for v in order:
        if not 0 <= v < g.n:
            raise GraphFormatError(f"vertex {v} out of range for n={g.n}")
    rows = []
    for u in order:
        row = 0
        for j, w in enumerate(order):
            if (g.rows[u] >> w) & 1:
                row |= 1 << j
        rows.append(row)
    return Graph._trusted(len(order), tuple(rows))


def remove_vertex(g: Graph, v: int) -> Graph:
    """G - v, remaining vertices relabeled in ascending order."""
    if not 0 <= v < g.n:
        raise GraphFormatError(f"vertex {v} out of range for n={g.n}")
    return induced_subgraph(g, (u for u in range(g.n) if u != v))
