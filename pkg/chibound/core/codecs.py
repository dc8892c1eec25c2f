"""graph6 and DIMACS .col codecs."""

import logging
from math import comb

from chibound.core.config import settings
from chibound.core.errors import GraphFormatError
from chibound.core.graph import Graph, pair_order

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
_SMALL_N = 62
_MEDIUM_N = 258047
_LARGE_N = 68719476735


# ============================================================================
# graph6
# ============================================================================

def _encode_length(n: int) -> str:
    if n <= _SMALL_N:
        return chr(n + 63)
    if n <= _MEDIUM_N:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= _LARGE_N:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise GraphFormatError(f"n={n} exceeds the graph6 limit {_LARGE_N}")


def graph6_encode(g: Graph) -> str:
    """
    Encode g as a graph6 line (no header, no newline).

    Upper-triangle bits are taken column by column, packed 6 per byte and
    offset by 63; the last byte is zero-padded.
    """
    rows = g.rows
    chars = [_encode_length(g.n)]
    acc = 0
    width = 0
    for u, v in pair_order(g.n):
        acc = (acc << 1) | ((rows[u] >> v) & 1)
        width += 1
        if width == 6:
            chars.append(chr(acc + 63))
            acc = 0
            width = 0
    if width:
        chars.append(chr((acc << (6 - width)) + 63))
    return "".join(chars)


def _decode_length(data: list[int]) -> tuple[int, int]:
    """Return (n, header length) from the 6-bit values of a graph6 line."""
    if data[0] < 63:
        return data[0], 1
    if len(data) >= 4 and data[1] < 63:
        return (data[1] << 12) | (data[2] << 6) | data[3], 4
    if len(data) >= 8 and data[1] == 63:
        n = 0
        for value in data[2:8]:
            n = (n << 6) | value
        return n, 8
    raise GraphFormatError("malformed graph6 length header")


def graph6_decode(text: str) -> Graph:
    """
    Decode one graph6 line.

    Args:
        text: graph6 string; an optional >>graph6<< header and surrounding
            whitespace are ignored

    Returns:
        The encoded graph on vertices 0..n-1

    Raises:
        GraphFormatError: malformed header, short payload or trailing bytes
    """
    line = text.strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):].strip()
    if not line:
        raise GraphFormatError("empty graph6 string")
    if line[0] in ":;":
        raise GraphFormatError("sparse6 input is not supported")
    if line[0] == "&":
        raise GraphFormatError("digraph6 input is not supported")

    data = [ord(c) - 63 for c in line]
    for i, value in enumerate(data):
        if not 0 <= value <= 63:
            raise GraphFormatError(f"invalid graph6 character {line[i]!r} at offset {i}")

    n, offset = _decode_length(data)
    expected = (comb(n, 2) + 5) // 6
    payload = data[offset:]
    if len(payload) < expected:
        raise GraphFormatError(
            f"graph6 payload too short for n={n}: {len(payload)} of {expected} bytes"
        )
    if len(payload) > expected:
        raise GraphFormatError(
            f"trailing garbage after graph6 payload ({len(payload) - expected} extra bytes)"
        )

    rows = [0] * n
    i = 0
    for v in range(1, n):
        for u in range(v):
            if (payload[i // 6] >> (5 - i % 6)) & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            i += 1
    return Graph._trusted(n, tuple(rows))


def graph6_lines(text: str) -> list[Graph]:
    """Decode every non-blank line of a graph6 file."""
    return [graph6_decode(line) for line in text.splitlines() if line.strip()]


# ============================================================================
# DIMACS .col
# ============================================================================

def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"line {lineno}: expected an integer, got {token!r}") from None


def dimacs_read(text: str) -> Graph:
    """
    Parse DIMACS .col text ("p edge n m", then 1-based "e u v" lines).

    Duplicate edge lines collapse; self-loops and out-of-range endpoints are
    rejected.
    """
    n = None
    declared_m = 0
    edges: set[tuple[int, int]] = set()
    duplicates = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "c%":
            continue
        fields = line.split()

        if fields[0] == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate problem line")
            if len(fields) != 4 or fields[1] not in ("edge", "edges", "col"):
                raise GraphFormatError(f"line {lineno}: malformed problem line {line!r}")
            n = _parse_int(fields[2], lineno)
            declared_m = _parse_int(fields[3], lineno)
            if n < 0 or declared_m < 0:
                raise GraphFormatError(f"line {lineno}: negative size in problem line")
            if n > settings.input_vertex_cap:
                raise GraphFormatError(
                    f"line {lineno}: n={n} exceeds the input limit {settings.input_vertex_cap}"
                )

        elif fields[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before the problem line")
            if len(fields) != 3:
                raise GraphFormatError(f"line {lineno}: malformed edge line {line!r}")
            u = _parse_int(fields[1], lineno)
            v = _parse_int(fields[2], lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise GraphFormatError(f"line {lineno}: vertex {x} out of range 1..{n}")
            if u == v:
                raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
            pair = (min(u, v) - 1, max(u, v) - 1)
            if pair in edges:
                duplicates += 1
            edges.add(pair)

        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {fields[0]!r}")

    if n is None:
        raise GraphFormatError("missing DIMACS problem line")
    if duplicates:
        logger.warning(f"Collapsed {duplicates} duplicate DIMACS edge lines")
    if len(edges) != declared_m:
        logger.warning(f"DIMACS problem line declares {declared_m} edges, read {len(edges)}")

    return Graph.from_edges(n, edges)


def dimacs_write(g: Graph) -> str:
    """Serialize g as DIMACS .col text with ascending 1-based edge lines."""
    lines = [f"p edge {g.n} {g.m}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def looks_like_dimacs(text: str) -> bool:
    """True when the first significant line is a DIMACS comment or problem line."""
    for raw in text.splitlines():
        line = raw.strip()
        if line:
            return line[0] in "cp%" and (len(line) == 1 or line[1] in " \t")
    return False
