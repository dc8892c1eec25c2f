"""Shared graphs and brute-force oracles."""

from itertools import combinations, product

import networkx as nx
import numpy as np
import pytest

from chibound.core.config import settings
from chibound.core.graph import Graph, join, pair_order
from chibound.services.generators import complete, cycle, petersen, sample_gnp, wheel


@pytest.fixture(autouse=True)
def quiet_progress(monkeypatch):
    monkeypatch.setattr(settings, "progress", False)


@pytest.fixture
def c5() -> Graph:
    return cycle(5)


@pytest.fixture
def c5_plus_apex() -> Graph:
    """join(C5, K1): the rim is 0..4 and the apex is vertex 5."""
    return join(cycle(5), complete(1))


@pytest.fixture
def k1_plus_c4() -> Graph:
    return wheel(4)


@pytest.fixture
def petersen_graph() -> Graph:
    return petersen()


def all_graphs(n: int):
    for mask in range(1 << len(pair_order(n))):
        yield Graph.from_edge_mask(n, mask)


def random_graphs(count: int, max_n: int, min_n: int = 0, seed: int = 0) -> list[Graph]:
    """Seeded G(n, p) samples with n and p drawn per graph."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(min_n, max_n + 1))
        out.append(sample_gnp(n, float(rng.uniform()), rng))
    return out


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


# ============================================================================
# Brute-force oracles (small n only)
# ============================================================================

def brute_alpha(g: Graph) -> int:
    best = 0
    for k in range(1, g.n + 1):
        if any(g.is_independent(s) for s in combinations(range(g.n), k)):
            best = k
        else:
            break
    return best


def brute_omega(g: Graph) -> int:
    best = 0
    for k in range(1, g.n + 1):
        if any(g.is_clique(s) for s in combinations(range(g.n), k)):
            best = k
        else:
            break
    return best


def brute_chi(g: Graph) -> int:
    if g.n == 0:
        return 0
    edges = g.edges()
    for k in range(1, g.n + 1):
        for color in product(range(k), repeat=g.n):
            if all(color[u] != color[v] for u, v in edges):
                return k
    return g.n


def brute_has_k1_plus_c4(g: Graph) -> bool:
    """Scan every 5-subset for a vertex dominating an induced 4-cycle."""
    for five in combinations(range(g.n), 5):
        for hub in five:
            rim = [x for x in five if x != hub]
            if not all(g.has_edge(hub, x) for x in rim):
                continue
            # A 4-vertex graph that is 2-regular is C4
            if all(sum(g.has_edge(x, y) for y in rim if y != x) == 2 for x in rim):
                return True
    return False


def brute_member(g: Graph) -> bool:
    return brute_alpha(g) <= 2 and not brute_has_k1_plus_c4(g)
