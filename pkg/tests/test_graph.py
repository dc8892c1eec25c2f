import pickle

import networkx as nx
import pytest

from chibound.core.errors import GraphFormatError
from chibound.core.graph import (
    Graph,
    complement,
    disjoint_union,
    induced_subgraph,
    join,
    pair_order,
    remove_vertex,
)
from conftest import random_graphs, to_networkx


def test_pair_order_is_column_major():
    assert pair_order(4) == ((0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3))


def test_from_edges_collapses_duplicates(c5):
    g = Graph.from_edges(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert g == c5
    assert g.m == 5
    assert g.edges() == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]


def test_queries(c5):
    assert c5.neighbors(0) == [1, 4]
    assert c5.closed_neighbors(0) == [0, 1, 4]
    assert c5.degree(3) == 2
    assert c5.max_degree == 2
    assert c5.non_edges() == [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]
    assert c5.is_clique([0, 1])
    assert c5.is_independent([0, 2])
    assert not c5.is_complete()
    assert repr(c5) == "Graph(n=5, m=5)"


@pytest.mark.parametrize(
    "n,edges",
    [(2, [(0, 0)]), (2, [(0, 2)]), (-1, [])],
)
def test_from_edges_rejects_bad_edges(n, edges):
    with pytest.raises(GraphFormatError):
        Graph.from_edges(n, edges)


def test_rows_must_be_symmetric():
    with pytest.raises(GraphFormatError, match="asymmetric"):
        Graph(2, [0b10, 0])


def test_graph_is_immutable(c5):
    with pytest.raises(AttributeError):
        c5._n = 7


def test_graph_pickles(c5):
    assert pickle.loads(pickle.dumps(c5)) == c5


def test_edge_mask_inverts_from_edge_mask():
    for g in random_graphs(100, max_n=8):
        assert Graph.from_edge_mask(g.n, g.edge_mask) == g


def test_complement_is_an_involution():
    for g in random_graphs(100, max_n=8):
        h = complement(g)
        assert h.m + g.m == g.n * (g.n - 1) // 2
        assert complement(h) == g


def test_join_adds_every_cross_edge(c5, c5_plus_apex):
    assert c5_plus_apex.n == 6
    assert c5_plus_apex.m == 10
    assert c5_plus_apex.neighbors(5) == [0, 1, 2, 3, 4]
    assert induced_subgraph(c5_plus_apex, range(5)) == c5


def test_disjoint_union_relabels_second_graph(c5):
    g = disjoint_union(c5, Graph.from_edges(2, [(0, 1)]))
    assert g.n == 7
    assert g.has_edge(5, 6)
    assert not g.has_edge(4, 5)


def test_induced_subgraph_relabels_ascending(c5):
    h = induced_subgraph(c5, [4, 0, 2])
    # 0-4 is the only edge among {0, 2, 4}; it becomes 0-2
    assert h.edges() == [(0, 2)]
    with pytest.raises(GraphFormatError):
        induced_subgraph(c5, [5])


def test_remove_vertex(c5_plus_apex, c5):
    assert remove_vertex(c5_plus_apex, 5) == c5
    assert remove_vertex(c5, 0).edges() == [(0, 1), (1, 2), (2, 3)]


def test_join_of_empty_graphs_is_complete_bipartite():
    g = join(Graph.empty(2), Graph.empty(3))
    assert g.m == 6
    assert g.non_edges() == [(0, 1), (2, 3), (2, 4), (3, 4)]


def test_join_is_associative():
    graphs = random_graphs(90, max_n=4, seed=5)
    for a, b, c in zip(graphs[0::3], graphs[1::3], graphs[2::3]):
        assert join(join(a, b), c) == join(a, join(b, c))


def test_join_commutes_up_to_relabeling():
    graphs = random_graphs(60, max_n=5, seed=6)
    for a, b in zip(graphs[0::2], graphs[1::2]):
        assert nx.is_isomorphic(to_networkx(join(a, b)), to_networkx(join(b, a)))


def test_join_edge_count():
    graphs = random_graphs(200, max_n=9, seed=7)
    for a, b in zip(graphs[0::2], graphs[1::2]):
        g = join(a, b)
        assert g.n == a.n + b.n
        assert g.m == a.m + b.m + a.n * b.n
