"""Induced 3K1 / K1+C4 detection and class membership."""

import logging
from typing import Optional

from chibound.core.errors import NotAMemberError
from chibound.core.graph import Graph, iter_bits
from chibound.models.schemas import MembershipVerdict, Witness

logger = logging.getLogger(__name__)


def _above(v: int) -> int:
    """Mask clearing bits 0..v."""
    return ~((1 << (v + 1)) - 1)


def _three_k1_vertices(g: Graph) -> Optional[tuple[int, int, int]]:
    """Lexicographically least pairwise non-adjacent triple, or None."""
    rows = g.rows
    full = g.full_mask
    for a in range(g.n):
        non_a = full & ~rows[a] & _above(a)
        rest = non_a
        while rest:
            low = rest & -rest
            rest ^= low
            b = low.bit_length() - 1
            common = non_a & ~rows[b] & _above(b)
            if common:
                return a, b, (common & -common).bit_length() - 1
    return None


def _k1_plus_c4_vertices(g: Graph) -> Optional[tuple[int, int, int, int, int]]:
    """
    First (hub, x, z, y, t) with x-z-y-t-x an induced C4 inside N(hub).

    x, y are the non-adjacent diagonal (x < y) and z < t the other diagonal,
    both common neighbours of x and y inside N(hub).
    """
    rows = g.rows
    for hub in range(g.n):
        around = rows[hub]
        if around.bit_count() < 4:
            continue
        for x in iter_bits(around):
            for y in iter_bits(around & ~rows[x] & _above(x)):
                common = rows[x] & rows[y] & around
                if common.bit_count() < 2:
                    continue
                for z in iter_bits(common):
                    ts = common & ~rows[z] & _above(z)
                    if ts:
                        return hub, x, z, y, (ts & -ts).bit_length() - 1
    return None


def find_3K1(g: Graph) -> Optional[Witness]:
    """
    Find an induced 3K1 (three pairwise non-adjacent vertices).

    Returns:
        The lexicographically least such triple, or None when alpha(g) <= 2
    """
    triple = _three_k1_vertices(g)
    if triple is None:
        return None
    return Witness(kind="3K1", vertices=list(triple))


def find_K1_plus_C4(g: Graph) -> Optional[Witness]:
    """
    Find an induced K1+C4 by searching for an induced C4 inside each N(hub).

    Returns:
        Witness with the hub first and the rim in cyclic order, or None
    """
    found = _k1_plus_c4_vertices(g)
    if found is None:
        return None
    return Witness(kind="K1+C4", vertices=list(found))


def is_three_k1_free(g: Graph) -> bool:
    return _three_k1_vertices(g) is None


def is_member(g: Graph) -> bool:
    """True iff g is {3K1, K1+C4}-free."""
    return _three_k1_vertices(g) is None and _k1_plus_c4_vertices(g) is None


def classify_membership(g: Graph) -> MembershipVerdict:
    """Decide membership; 3K1 is checked before K1+C4."""
    witness = find_3K1(g)
    if witness is None:
        witness = find_K1_plus_C4(g)
    if witness is None:
        return MembershipVerdict(member=True)
    logger.debug(f"Excluded {g!r}: {witness.kind} at {witness.vertices}")
    return MembershipVerdict(member=False, witness=witness)


def require_member(g: Graph, operation: str) -> None:
    """Raise NotAMemberError, carrying the witness, unless g is in the class."""
    verdict = classify_membership(g)
    if not verdict.member:
        raise NotAMemberError(
            f"{operation} needs a {{3K1, K1+C4}}-free graph; found {verdict.witness.kind} "
            f"at {verdict.witness.vertices}",
            witness=verdict.witness,
        )


def verify_witness(g: Graph, w: Witness) -> bool:
    """
    Check a witness against g. Never raises on malformed witnesses.

    Returns:
        True iff the vertices are in range, distinct and show the exact
        adjacency pattern of the witness kind
    """
    vertices = list(w.vertices)
    if len(set(vertices)) != len(vertices):
        return False
    if any(not isinstance(v, int) or not 0 <= v < g.n for v in vertices):
        return False

    if w.kind == "3K1":
        if len(vertices) != 3:
            return False
        a, b, c = vertices
        return not (g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c))

    if len(vertices) != 5:
        return False
    hub, *rim = vertices
    if not all(g.has_edge(hub, r) for r in rim):
        return False
    v1, v2, v3, v4 = rim
    cycle = g.has_edge(v1, v2) and g.has_edge(v2, v3) and g.has_edge(v3, v4) and g.has_edge(v4, v1)
    chords = g.has_edge(v1, v3) or g.has_edge(v2, v4)
    return cycle and not chords
