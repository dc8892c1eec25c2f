"""Clique partition, neighbourhood decomposition and the claims S1..S7."""

import pytest

from chibound.core.errors import (
    CompleteGraphError,
    DecompositionMismatchError,
    EmptyGraphError,
    InvalidPairError,
    NotAMemberError,
)
from chibound.core.graph import Graph, complement
from chibound.services.generators import complete
from chibound.services.invariants import validate_coloring
from chibound.services.recognition import is_member
from chibound.services.structure import (
    check_partition,
    check_structure,
    clique_cover_bound,
    complement_coloring,
    lemma1_partition,
    proof_decomposition,
)
from conftest import all_graphs


# ============================================================================
# Clique partition
# ============================================================================

def test_c5_partition(c5):
    partition = lemma1_partition(c5)
    assert partition.anchor == (0, 2)
    assert partition.parts == [[0, 1], [2], [4], [3]]
    assert partition.roles == ["M1", "M2", "M3", "M4"]
    assert partition.j == 4
    assert check_partition(c5, partition) == []


def test_complete_graph_is_one_part():
    partition = lemma1_partition(complete(4))
    assert partition.parts == [[0, 1, 2, 3]]
    assert partition.anchor is None


def test_empty_parts_are_dropped():
    # P3 anchored at (0, 2): A = {1}, B = C = {}
    partition = lemma1_partition(Graph.from_edges(3, [(0, 1), (1, 2)]))
    assert partition.parts == [[0, 1], [2]]
    assert partition.roles == ["M1", "M2"]


def test_explicit_pair(c5):
    partition = lemma1_partition(c5, pair=(3, 1))
    assert partition.anchor == (3, 1)
    assert partition.parts[0] == [2, 3]


@pytest.mark.parametrize("pair", [(0, 1), (0, 0), (0, 9)])
def test_invalid_pairs(c5, pair):
    with pytest.raises(InvalidPairError):
        lemma1_partition(c5, pair=pair)


def test_partition_needs_a_member(k1_plus_c4):
    with pytest.raises(NotAMemberError) as info:
        lemma1_partition(k1_plus_c4)
    assert info.value.witness.kind == "K1+C4"


def test_partition_needs_a_vertex():
    with pytest.raises(EmptyGraphError):
        lemma1_partition(Graph.empty(0))


def test_check_partition_reports_problems(c5):
    partition = lemma1_partition(c5).model_copy(update={"parts": [[0, 2], [1], [4], [3]]})
    issues = check_partition(c5, partition)
    assert any("not a clique" in issue for issue in issues)


def test_clique_cover_bound(c5):
    assert clique_cover_bound(c5) == 4
    coloring = complement_coloring(lemma1_partition(c5), c5.n)
    assert coloring.color == [0, 0, 1, 3, 2]
    assert validate_coloring(complement(c5), coloring)


# ============================================================================
# Neighbourhood decomposition
# ============================================================================

def test_c5_decomposition(c5):
    d = proof_decomposition(c5)
    assert (d.v, d.w) == (0, 2)
    assert (d.a, d.b, d.c) == ([1], [4], [3])
    assert (d.a1, d.a2) == ([1], [])
    assert (d.b11, d.b12, d.b2) == ([], [4], [])
    assert not d.fallback

    report = check_structure(c5, d)
    assert report.holds
    assert report.member
    assert report.v_is_max_degree
    assert report.claims["S4"].derived
    assert list(report.claims) == ["S1", "S2", "S3", "S4", "S5", "S6", "S7"]


def test_universal_vertex_fallback(c5_plus_apex):
    d = proof_decomposition(c5_plus_apex)
    assert d.fallback
    assert (d.v, d.w) == (0, 2)
    assert d.a == [1, 5]
    report = check_structure(c5_plus_apex, d)
    assert report.holds
    assert not report.v_is_max_degree


def test_p3_fallback():
    d = proof_decomposition(Graph.from_edges(3, [(0, 1), (1, 2)]))
    assert (d.v, d.w, d.fallback) == (0, 2, True)


def test_complete_graph_has_no_decomposition():
    with pytest.raises(CompleteGraphError):
        proof_decomposition(complete(3))


def test_non_member_needs_force(k1_plus_c4):
    with pytest.raises(NotAMemberError):
        proof_decomposition(k1_plus_c4)
    d = proof_decomposition(k1_plus_c4, force=True)
    assert not check_structure(k1_plus_c4, d).member


def test_failed_claim_carries_counterexample():
    # Star with centre 0 plus an isolated vertex: B = {1, 2, 3} is independent
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3)])
    d = proof_decomposition(g, force=True)
    assert (d.v, d.w) == (0, 4)
    assert d.outside == []
    report = check_structure(g, d)
    assert not report.member
    assert report.claims["S1"].counterexample == [1, 2]
    assert "S1" in report.failed()


def test_mismatched_decomposition(c5):
    d = proof_decomposition(c5)
    with pytest.raises(DecompositionMismatchError):
        check_structure(complete(5), d)
    with pytest.raises(DecompositionMismatchError):
        check_structure(c5, d.model_copy(update={"b12": [], "b2": [4]}))


# ============================================================================
# Exhaustive checks on small members
# ============================================================================

def _ordered_non_edges(g):
    return [p for v, w in g.non_edges() for p in ((v, w), (w, v))]


def test_every_member_up_to_five_satisfies_the_claims():
    for n in range(1, 6):
        for g in all_graphs(n):
            if not is_member(g):
                continue
            assert check_partition(g, lemma1_partition(g)) == []
            if g.is_complete():
                continue
            assert check_structure(g, proof_decomposition(g)).holds
            for pair in _ordered_non_edges(g):
                partition = lemma1_partition(g, pair=pair)
                assert check_partition(g, partition) == []
                assert validate_coloring(complement(g), complement_coloring(partition, n))
                report = check_structure(g, proof_decomposition(g, pair=pair))
                failed = [c for c in report.failed() if c != "S7" or report.v_is_max_degree]
                assert failed == []
