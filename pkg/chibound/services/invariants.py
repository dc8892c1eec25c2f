"""
Exact invariants: clique number, independence number, chromatic number.

Two chromatic engines exist. The branch-and-bound engine works on any graph;
the matching engine only applies when alpha <= 2, where colour classes have
at most two vertices and chi = n - |maximum matching of the complement|.
Whenever both apply they are run and must agree.
"""

import logging
from typing import Optional

from chibound.core.codecs import graph6_encode
from chibound.core.config import settings
from chibound.core.errors import (
    ConsistencyError,
    ContainsThreeK1Error,
    EngineDisagreementError,
    SizeCapExceededError,
)
from chibound.core.graph import Graph, complement, iter_bits, list_to_bits
from chibound.models.schemas import Coloring, InvariantReport
from chibound.services.matching import maximum_matching
from chibound.services.recognition import find_3K1

logger = logging.getLogger(__name__)


def require_within_cap(g: Graph, operation: str, cap: Optional[int] = None) -> None:
    """Raise SizeCapExceededError when g is larger than the cap."""
    limit = settings.size_cap if cap is None else cap
    if g.n > limit:
        raise SizeCapExceededError(g.n, limit, operation)


def normalize_coloring(color: list[int]) -> list[int]:
    """Relabel colours in order of first appearance (vertex 0 gets colour 0)."""
    relabel: dict[int, int] = {}
    return [relabel.setdefault(c, len(relabel)) for c in color]


# ============================================================================
# Maximum clique
# ============================================================================

def _color_sort(rows: tuple[int, ...], candidates: int) -> tuple[list[int], list[int]]:
    """
    Greedy colour classes over the candidates.

    Returns the vertices in class order and, for each, its class number, an
    upper bound on the clique size reachable from the prefix ending there.
    """
    order: list[int] = []
    bounds: list[int] = []
    uncolored = candidates
    color = 0
    while uncolored:
        color += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            available &= ~rows[v] & ~low
            uncolored &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


class _CliqueSearch:
    def __init__(self, rows: tuple[int, ...]):
        self.rows = rows
        self.best: list[int] = []

    def expand(self, clique: list[int], candidates: int) -> None:
        order, bounds = _color_sort(self.rows, candidates)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(self.best):
                return
            v = order[i]
            clique.append(v)
            narrowed = candidates & self.rows[v]
            if narrowed:
                self.expand(clique, narrowed)
            elif len(clique) > len(self.best):
                self.best = list(clique)
            clique.pop()
            candidates &= ~(1 << v)


def max_clique(g: Graph) -> list[int]:
    """Maximum clique by branch-and-bound with colour-class bounds (sorted, no cap)."""
    search = _CliqueSearch(g.rows)
    search.expand([], g.full_mask)
    return sorted(search.best)


def clique_number(g: Graph, cap: Optional[int] = None) -> tuple[int, list[int]]:
    """
    Exact clique number.

    Returns:
        (omega, witness clique in ascending order)
    """
    require_within_cap(g, "clique_number", cap)
    clique = max_clique(g)
    return len(clique), clique


def independence_number(g: Graph, cap: Optional[int] = None) -> tuple[int, list[int]]:
    """alpha(g) = omega(complement(g)), with an independent-set witness."""
    require_within_cap(g, "independence_number", cap)
    independent = max_clique(complement(g))
    return len(independent), independent


# ============================================================================
# Branch-and-bound colouring
# ============================================================================

def _pick_dsatur(rows: tuple[int, ...], classes: list[int], uncolored: int) -> int:
    """Uncoloured vertex with max saturation, then max degree, then least index."""
    best_v = -1
    best_key = (-1, -1)
    for v in iter_bits(uncolored):
        row = rows[v]
        key = (sum(1 for cls in classes if row & cls), row.bit_count())
        if key > best_key:
            best_key = key
            best_v = v
    return best_v


def greedy_coloring(g: Graph) -> list[int]:
    """DSATUR greedy colouring; an upper bound only, never reported as chi."""
    rows = g.rows
    color = [-1] * g.n
    classes: list[int] = []
    uncolored = g.full_mask
    while uncolored:
        v = _pick_dsatur(rows, classes, uncolored)
        for c, cls in enumerate(classes):
            if not rows[v] & cls:
                break
        else:
            c = len(classes)
            classes.append(0)
        classes[c] |= 1 << v
        color[v] = c
        uncolored &= ~(1 << v)
    return color


class _ColoringSearch:
    """Exact DSATUR branch-and-bound between the clique bound and a greedy bound."""

    def __init__(self, g: Graph, clique: list[int], upper: list[int]):
        self.rows = g.rows
        self.lower = len(clique)
        self.best = upper
        self.best_k = max(upper) + 1 if upper else 0
        self.color = [-1] * g.n
        self.classes: list[int] = []
        self.clique = clique
        self.full = g.full_mask

    def solve(self) -> list[int]:
        if self.best_k > self.lower:
            # The clique needs pairwise distinct colours; fixing them breaks symmetry
            for c, v in enumerate(self.clique):
                self.color[v] = c
                self.classes.append(1 << v)
            self._search(self.full & ~list_to_bits(self.clique))
        return self.best

    def _search(self, uncolored: int) -> None:
        k = len(self.classes)
        if k >= self.best_k:
            return
        if not uncolored:
            self.best_k = k
            self.best = list(self.color)
            return

        v = _pick_dsatur(self.rows, self.classes, uncolored)
        bit = 1 << v
        rest = uncolored & ~bit
        row = self.rows[v]

        for c in range(k):
            if row & self.classes[c]:
                continue
            self.color[v] = c
            self.classes[c] |= bit
            self._search(rest)
            self.classes[c] &= ~bit
            self.color[v] = -1
            if self.best_k <= self.lower:
                return

        if k + 1 < self.best_k:
            self.color[v] = k
            self.classes.append(bit)
            self._search(rest)
            self.classes.pop()
            self.color[v] = -1


def optimal_coloring(g: Graph, clique: Optional[list[int]] = None) -> list[int]:
    """Optimal colouring by branch-and-bound (no cap), normalized."""
    if g.n == 0:
        return []
    clique = max_clique(g) if clique is None else clique
    upper = greedy_coloring(g)
    return normalize_coloring(_ColoringSearch(g, clique, upper).solve())


def chromatic_number_bb(g: Graph, cap: Optional[int] = None) -> tuple[int, Coloring]:
    """
    Exact chromatic number by saturation-ordered branch-and-bound.

    Returns:
        (chi, optimal proper colouring)
    """
    require_within_cap(g, "chromatic_number_bb", cap)
    color = optimal_coloring(g)
    return len(set(color)), Coloring(color=color)


# ============================================================================
# Matching colouring (alpha <= 2)
# ============================================================================

def matching_coloring(g: Graph) -> list[int]:
    """
    Colouring from a maximum matching of the complement (assumes alpha <= 2).

    Each matched complement edge is a non-adjacent pair sharing one colour;
    every unmatched vertex gets its own colour.
    """
    mate = [-1] * g.n
    for u, v in maximum_matching(complement(g)).edges:
        mate[u] = v
        mate[v] = u
    color = [-1] * g.n
    next_color = 0
    for u in range(g.n):
        if color[u] != -1:
            continue
        color[u] = next_color
        if mate[u] != -1:
            color[mate[u]] = next_color
        next_color += 1
    return color


def chromatic_number_via_matching(g: Graph) -> tuple[int, Coloring]:
    """
    chi = n - |maximum matching of complement(g)|, valid when alpha(g) <= 2.

    Raises:
        ContainsThreeK1Error: g has three pairwise non-adjacent vertices
    """
    witness = find_3K1(g)
    if witness is not None:
        raise ContainsThreeK1Error(
            f"matching engine needs alpha <= 2; independent triple {witness.vertices}",
            witness=witness,
        )
    color = matching_coloring(g)
    return len(set(color)), Coloring(color=color)


def validate_coloring(g: Graph, c: Coloring) -> bool:
    """True iff c colours every vertex with a non-negative colour and no edge is monochromatic."""
    color = c.color
    if len(color) != g.n or any(not isinstance(x, int) or x < 0 for x in color):
        return False
    return all(color[u] != color[v] for u, v in g.edges())


# ============================================================================
# Aggregate report
# ============================================================================

def invariant_report(g: Graph, cap: Optional[int] = None) -> InvariantReport:
    """
    All exact invariants with certificates.

    When alpha <= 2 both chromatic engines run and must agree.

    Raises:
        SizeCapExceededError: n above the cap
        EngineDisagreementError: the engines return different chi
        ConsistencyError: a certificate fails validation
    """
    require_within_cap(g, "invariant_report", cap)

    clique = max_clique(g)
    alpha = len(max_clique(complement(g)))
    color = optimal_coloring(g, clique)
    chi = len(set(color))
    engines = ["branch_and_bound"]

    if not g.is_clique(clique):
        raise ConsistencyError(f"clique witness {clique} is not a clique")
    if not validate_coloring(g, Coloring(color=color)):
        raise ConsistencyError("branch-and-bound colouring is not proper")

    if alpha <= 2:
        matched = matching_coloring(g)
        chi_matching = len(set(matched))
        if chi_matching != chi:
            raise EngineDisagreementError(chi, chi_matching, graph6_encode(g))
        if not validate_coloring(g, Coloring(color=matched)):
            raise ConsistencyError("matching colouring is not proper")
        engines.append("matching")

    return InvariantReport(
        n=g.n,
        m=g.m,
        max_degree=g.max_degree,
        alpha=alpha,
        omega=len(clique),
        chi=chi,
        clique=clique,
        coloring=color,
        engines=engines,
    )
