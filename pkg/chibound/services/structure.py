"""
Constructive decompositions of {3K1, K1+C4}-free graphs and their claim checks.

Two constructions share one vocabulary. For a non-adjacent pair (v, w):
A holds the common neighbours, B the neighbours of v only, C those of w only;
A1 is a maximal clique of <A> and A2 = A - A1. The clique partition takes
M1 = A1 + v, M2 = A2 + w, M3 = B, M4 = C. The neighbourhood decomposition
additionally splits B by which side of A it misses.
"""

import logging
from typing import Optional

from chibound.core.errors import (
    CompleteGraphError,
    ConsistencyError,
    DecompositionMismatchError,
    EmptyGraphError,
    InvalidPairError,
)
from chibound.core.graph import Graph, bits_to_list, complement, iter_bits, list_to_bits
from chibound.models.schemas import (
    ClaimCheck,
    ClaimId,
    CliquePartition,
    Coloring,
    NeighborhoodDecomposition,
    PartRole,
    StructureReport,
)
from chibound.services.invariants import max_clique, require_within_cap, validate_coloring
from chibound.services.recognition import is_member, require_member

logger = logging.getLogger(__name__)

CLAIM_DESCRIPTIONS: dict[ClaimId, str] = {
    "S1": "<B> and <C> are complete",
    "S2": "<A2> is complete",
    "S3": "no edges between A1 and A2",
    "S4": "B11 and B12 are disjoint",
    "S5": "<B11 + A1 + B2> and <B12 + A2 + B2> are complete",
    "S6": "|A1|+|B11|+|B2|+1 <= omega and |A2|+|B12|+|B2|+1 <= omega",
    "S7": "deg(v) = |A1|+|A2|+|B11|+|B12|+|B2| <= 2 omega - 2 - |B2|",
}

_SIZE_SLACK: dict[PartRole, int] = {"M1": 0, "M2": 0, "M3": 1, "M4": 1}


# ============================================================================
# Shared helpers
# ============================================================================

def _resolve_pair(g: Graph, pair: Optional[tuple[int, int]]) -> Optional[tuple[int, int]]:
    """Validate an explicit pair, or return the lexicographically least non-adjacent pair."""
    if pair is None:
        non_edges = g.non_edges()
        return non_edges[0] if non_edges else None
    v, w = pair
    if not (0 <= v < g.n and 0 <= w < g.n):
        raise InvalidPairError(f"pair ({v}, {w}) out of range for n={g.n}")
    if v == w:
        raise InvalidPairError(f"pair ({v}, {w}) repeats a vertex")
    if g.has_edge(v, w):
        raise InvalidPairError(f"pair ({v}, {w}) is adjacent")
    return v, w


def _greedy_clique(g: Graph, candidates: int) -> int:
    """Repeatedly add the least-index candidate adjacent to everything chosen."""
    rows = g.rows
    chosen = 0
    for x in iter_bits(candidates):
        if rows[x] & chosen == chosen:
            chosen |= 1 << x
    return chosen


def _split_neighbourhoods(g: Graph, v: int, w: int) -> tuple[int, int, int]:
    """(A, B, C) as bitsets for the non-adjacent pair (v, w)."""
    nv = g.rows[v]
    nw = g.rows[w]
    return nv & nw, nv & ~nw, nw & ~nv


def _first_non_adjacent(g: Graph, mask: int) -> Optional[list[int]]:
    rows = g.rows
    for x in iter_bits(mask):
        missing = mask & ~rows[x] & ~((1 << (x + 1)) - 1)
        if missing:
            return [x, (missing & -missing).bit_length() - 1]
    return None


# ============================================================================
# Four-clique partition
# ============================================================================

def lemma1_partition(
    g: Graph,
    pair: Optional[tuple[int, int]] = None,
    cap: Optional[int] = None,
    check_membership: bool = True,
) -> CliquePartition:
    """
    Partition V(G) into at most four cliques M1..M4.

    Args:
        g: A non-empty {3K1, K1+C4}-free graph
        pair: Non-adjacent anchor (v, w); default the lexicographically least
        cap: Size cap override
        check_membership: Skip the membership test when the caller already did it

    Returns:
        CliquePartition with empty parts dropped

    Raises:
        EmptyGraphError, NotAMemberError, InvalidPairError
    """
    require_within_cap(g, "lemma1_partition", cap)
    if g.n == 0:
        raise EmptyGraphError("lemma1_partition needs at least one vertex")
    if check_membership:
        require_member(g, "lemma1_partition")

    anchor = _resolve_pair(g, pair)
    if anchor is None:
        return CliquePartition(parts=[list(range(g.n))], roles=["M1"], anchor=None)

    v, w = anchor
    a, b, c = _split_neighbourhoods(g, v, w)
    a1 = _greedy_clique(g, a)
    a2 = a & ~a1

    parts: list[list[int]] = []
    roles: list[PartRole] = []
    for role, mask in (("M1", a1 | (1 << v)), ("M2", a2 | (1 << w)), ("M3", b), ("M4", c)):
        if mask:
            parts.append(bits_to_list(mask))
            roles.append(role)
    return CliquePartition(parts=parts, roles=roles, anchor=(v, w))


def check_partition(g: Graph, partition: CliquePartition, omega: Optional[int] = None) -> list[str]:
    """
    List every violated partition condition; an empty list means sound.

    Conditions: disjoint parts covering V(G), each part a clique, 1 <= j <= 4,
    |M1|, |M2| <= omega and |M3|, |M4| <= omega - 1.
    """
    omega = len(max_clique(g)) if omega is None else omega
    issues: list[str] = []

    seen = 0
    for part in partition.parts:
        mask = list_to_bits(part)
        if seen & mask:
            issues.append(f"part {part} overlaps an earlier part")
        seen |= mask
    if seen != g.full_mask:
        issues.append(f"parts miss vertices {bits_to_list(g.full_mask & ~seen)}")

    if g.n and not 1 <= partition.j <= 4:
        issues.append(f"j={partition.j} outside 1..4")

    for role, part in zip(partition.roles, partition.parts):
        if not g.is_clique(part):
            issues.append(f"{role}={part} is not a clique")
        limit = omega - _SIZE_SLACK[role]
        if len(part) > limit:
            issues.append(f"|{role}|={len(part)} exceeds {limit}")
    return issues


def complement_coloring(partition: CliquePartition, n: int) -> Coloring:
    """Colouring of the complement induced by a clique partition (colour = part index)."""
    color = [-1] * n
    for index, part in enumerate(partition.parts):
        for x in part:
            color[x] = index
    return Coloring(color=color)


def clique_cover_bound(g: Graph, cap: Optional[int] = None) -> int:
    """
    Number of cliques j in the four-clique partition.

    The partition is checked as an explicit colouring of the complement, so
    chi(complement(g)) <= j.

    Raises:
        NotAMemberError: g is not in the class
        ConsistencyError: the induced complement colouring is not proper
    """
    partition = lemma1_partition(g, cap=cap)
    coloring = complement_coloring(partition, g.n)
    if not validate_coloring(complement(g), coloring):
        raise ConsistencyError(f"partition {partition.parts} is not a proper complement colouring")
    return partition.j


# ============================================================================
# Neighbourhood decomposition
# ============================================================================

def _choose_anchor(g: Graph) -> tuple[int, int, bool]:
    """
    v: least-index vertex of maximum degree; w: its least-index non-neighbour.

    When every maximum-degree vertex is universal, v is the least-index vertex
    of largest degree among those with a non-neighbour (fallback=True).
    """
    universal = g.n - 1
    delta = g.max_degree
    degrees = [g.degree(u) for u in range(g.n)]
    fallback = delta == universal
    if fallback:
        delta = max(d for d in degrees if d < universal)
    v = degrees.index(delta)
    missing = g.full_mask & ~g.rows[v] & ~(1 << v)
    return v, (missing & -missing).bit_length() - 1, fallback


def _decompose(g: Graph, v: int, w: int, fallback: bool) -> NeighborhoodDecomposition:
    rows = g.rows
    a, b, c = _split_neighbourhoods(g, v, w)
    a1 = _greedy_clique(g, a)
    a2 = a & ~a1
    b11 = 0
    b12 = 0
    for x in iter_bits(b):
        if a2 & ~rows[x]:
            b11 |= 1 << x
        if a1 & ~rows[x]:
            b12 |= 1 << x
    b2 = b & ~(b11 | b12)
    outside = g.full_mask & ~(a | b | c | (1 << v) | (1 << w))
    return NeighborhoodDecomposition(
        v=v,
        w=w,
        a=bits_to_list(a),
        b=bits_to_list(b),
        c=bits_to_list(c),
        a1=bits_to_list(a1),
        a2=bits_to_list(a2),
        b11=bits_to_list(b11),
        b12=bits_to_list(b12),
        b2=bits_to_list(b2),
        outside=bits_to_list(outside),
        fallback=fallback,
    )


def proof_decomposition(
    g: Graph,
    pair: Optional[tuple[int, int]] = None,
    force: bool = False,
    cap: Optional[int] = None,
) -> NeighborhoodDecomposition:
    """
    Build v, w, A, B, C, A1, A2, B11, B12, B2.

    Args:
        g: A {3K1, K1+C4}-free graph with at least one non-edge
        pair: Explicit non-adjacent (v, w) instead of the max-degree choice
        force: Allow non-members (claims may then fail)
        cap: Size cap override

    Raises:
        NotAMemberError, CompleteGraphError, InvalidPairError
    """
    require_within_cap(g, "proof_decomposition", cap)
    if not force:
        require_member(g, "proof_decomposition")
    if g.is_complete():
        raise CompleteGraphError("proof_decomposition needs a non-adjacent pair; graph is complete")

    if pair is not None:
        v, w = _resolve_pair(g, pair)
        fallback = False
    else:
        v, w, fallback = _choose_anchor(g)
        if fallback:
            logger.debug(f"Every max-degree vertex of {g!r} is universal; anchoring at {v}")
    return _decompose(g, v, w, fallback)


def _check_matches(g: Graph, d: NeighborhoodDecomposition) -> None:
    """Raise DecompositionMismatchError unless d was built from g."""
    if not (0 <= d.v < g.n and 0 <= d.w < g.n) or d.v == d.w or g.has_edge(d.v, d.w):
        raise DecompositionMismatchError(f"({d.v}, {d.w}) is not a non-adjacent pair of the graph")
    a, b, c = _split_neighbourhoods(g, d.v, d.w)
    expected = {"a": a, "b": b, "c": c}
    for name, mask in expected.items():
        if list_to_bits(getattr(d, name)) != mask:
            raise DecompositionMismatchError(f"set {name.upper()} does not match the graph")
    a1 = list_to_bits(d.a1)
    if a1 & ~a or list_to_bits(d.a2) != a & ~a1:
        raise DecompositionMismatchError("A1/A2 do not split A")
    rebuilt_b11 = sum(1 << x for x in iter_bits(b) if list_to_bits(d.a2) & ~g.rows[x])
    rebuilt_b12 = sum(1 << x for x in iter_bits(b) if a1 & ~g.rows[x])
    if list_to_bits(d.b11) != rebuilt_b11 or list_to_bits(d.b12) != rebuilt_b12:
        raise DecompositionMismatchError("B11/B12 do not match their definitions")
    if list_to_bits(d.b2) != b & ~(rebuilt_b11 | rebuilt_b12):
        raise DecompositionMismatchError("B2 does not match its definition")


def _claim(
    claim: ClaimId, counterexample: Optional[list[int]], derived: bool = False
) -> ClaimCheck:
    return ClaimCheck(
        claim=claim,
        description=CLAIM_DESCRIPTIONS[claim],
        holds=counterexample is None,
        derived=derived,
        counterexample=counterexample,
    )


def check_structure(
    g: Graph,
    d: NeighborhoodDecomposition,
    omega: Optional[int] = None,
) -> StructureReport:
    """
    Evaluate claims S1..S7 on a decomposition of g.

    Claims are reported, never asserted, so non-members show which claims
    depend on the hypotheses. S7 is evaluated on deg(v); when v has maximum
    degree this is the statement about Delta.

    Raises:
        DecompositionMismatchError: d was not built from g
    """
    _check_matches(g, d)
    omega = len(max_clique(g)) if omega is None else omega
    rows = g.rows

    a1 = list_to_bits(d.a1)
    a2 = list_to_bits(d.a2)
    b = list_to_bits(d.b)
    c = list_to_bits(d.c)
    b11 = list_to_bits(d.b11)
    b12 = list_to_bits(d.b12)
    b2 = list_to_bits(d.b2)
    v_bit = 1 << d.v

    claims: dict[ClaimId, ClaimCheck] = {}

    claims["S1"] = _claim("S1", _first_non_adjacent(g, b) or _first_non_adjacent(g, c))
    claims["S2"] = _claim("S2", _first_non_adjacent(g, a2))

    crossing = None
    for x in iter_bits(a1):
        hit = rows[x] & a2
        if hit:
            crossing = [x, (hit & -hit).bit_length() - 1]
            break
    claims["S3"] = _claim("S3", crossing)

    both = b11 & b12
    claims["S4"] = _claim("S4", bits_to_list(both) if both else None, derived=True)

    left = b11 | a1 | b2
    right = b12 | a2 | b2
    claims["S5"] = _claim("S5", _first_non_adjacent(g, left) or _first_non_adjacent(g, right))

    oversized = None
    for side in (left, right):
        if (side | v_bit).bit_count() > omega:
            oversized = bits_to_list(side | v_bit)
            break
    claims["S6"] = _claim("S6", oversized)

    degree = g.degree(d.v)
    size_sum = sum(m.bit_count() for m in (a1, a2, b11, b12, b2))
    s7 = None
    if degree != size_sum:
        s7 = bits_to_list((rows[d.v] ^ (a1 | a2 | b11 | b12 | b2)) | both) or [d.v]
    elif degree > 2 * omega - 2 - b2.bit_count():
        s7 = [d.v]
    claims["S7"] = _claim("S7", s7)

    report = StructureReport(
        v=d.v,
        w=d.w,
        member=is_member(g),
        v_is_max_degree=degree == g.max_degree,
        claims=claims,
    )
    if report.member and not report.holds:
        logger.warning(f"Structure claims {report.failed()} fail on a member: {g!r}")
    return report
