"""Test-instance constructors, labeled enumeration and random sampling."""

import logging
from math import comb
from typing import Iterator, Optional

import numpy as np
from pydantic import ValidationError

from chibound.core.config import settings
from chibound.core.errors import InvalidGeneratorSpecError, SamplingExhaustedError
from chibound.core.graph import Graph, join, pair_order
from chibound.models.schemas import GeneratorSpec
from chibound.services.recognition import is_member

logger = logging.getLogger(__name__)


# ============================================================================
# Named families
# ============================================================================

def cycle(r: int) -> Graph:
    """C_r on 0..r-1 with edges i, i+1 (mod r)."""
    if r < 3:
        raise InvalidGeneratorSpecError(f"cycle length must be >= 3, got {r}")
    return Graph.from_edges(r, ((i, (i + 1) % r) for i in range(r)))


def complete(k: int) -> Graph:
    if k < 0:
        raise InvalidGeneratorSpecError(f"clique size must be >= 0, got {k}")
    return Graph.from_edge_mask(k, (1 << comb(k, 2)) - 1)


def wheel(r: int) -> Graph:
    """join(K1, C_r): hub 0, rim 1..r."""
    return join(complete(1), cycle(r))


def join_power(factor: Graph, k: int) -> Graph:
    """k-fold join factor + factor + ... + factor."""
    if k < 1:
        raise InvalidGeneratorSpecError(f"copy count must be >= 1, got {k}")
    result = factor
    for _ in range(k - 1):
        result = join(result, factor)
    return result


def petersen() -> Graph:
    """Outer 5-cycle 0..4, spokes i to i+5, inner pentagram 5..9."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, edges)


def sample_gnp(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdos-Renyi G(n, p): pair i (pair_order) is an edge iff draw i < p."""
    pairs = len(pair_order(n))
    if pairs == 0:
        return Graph.empty(n)
    hits = np.flatnonzero(rng.random(pairs) < p)
    mask = 0
    for i in hits.tolist():
        mask |= 1 << i
    return Graph.from_edge_mask(n, mask)


def generate(spec: GeneratorSpec) -> Graph:
    """
    Build the graph a GeneratorSpec describes.

    Raises:
        InvalidGeneratorSpecError: sizes outside their valid range
    """
    if spec.kind == "cycle":
        return cycle(spec.size)
    if spec.kind == "complete":
        return complete(spec.size)
    if spec.kind == "wheel":
        return wheel(spec.size)
    if spec.kind == "join_power":
        return join_power(generate(spec.factor), spec.copies)
    return sample_gnp(spec.n, spec.p, np.random.default_rng(spec.seed))


def build_spec(**fields) -> GeneratorSpec:
    """Validate generator parameters, mapping pydantic errors to InvalidGeneratorSpecError."""
    try:
        return GeneratorSpec(**fields)
    except ValidationError as e:
        raise InvalidGeneratorSpecError(f"invalid generator spec: {e.errors()[0]['msg']}") from e


# ============================================================================
# Labeled enumeration
# ============================================================================

def labeled_count(n: int) -> int:
    return 1 << comb(n, 2)


def split_range(total: int, shards: int) -> list[tuple[int, int]]:
    """Split [0, total) into at most `shards` contiguous, covering, non-empty ranges."""
    shards = max(1, min(shards, total))
    step, extra = divmod(total, shards)
    ranges = []
    start = 0
    for i in range(shards):
        stop = start + step + (1 if i < extra else 0)
        ranges.append((start, stop))
        start = stop
    return ranges


def shard_ranges(n: int, shards: int) -> list[tuple[int, int]]:
    """Edge-mask shards of the labeled graphs on n vertices."""
    return split_range(labeled_count(n), shards)


def enumerate_labeled(
    n: int,
    start: int = 0,
    stop: Optional[int] = None,
    cap: Optional[int] = None,
) -> Iterator[Graph]:
    """
    Yield every labeled graph on n vertices, in edge-mask counter order.

    Mask i yields the graph whose edges are the set bits of i over
    pair_order(n). start/stop select one contiguous shard.

    Raises:
        InvalidGeneratorSpecError: n above the enumeration cap
    """
    limit = settings.enumeration_cap if cap is None else cap
    if n < 0 or n > limit:
        raise InvalidGeneratorSpecError(f"enumeration needs 0 <= n <= {limit}, got {n}")
    total = labeled_count(n)
    stop = total if stop is None else min(stop, total)
    for mask in range(start, stop):
        yield Graph.from_edge_mask(n, mask)


# ============================================================================
# Rejection sampling
# ============================================================================

def random_member(n: int, p: float, seed: int, max_tries: Optional[int] = None) -> Graph:
    """
    Rejection-sample G(n, p) until a {3K1, K1+C4}-free graph appears.

    Raises:
        InvalidGeneratorSpecError: p outside [0, 1] or n negative
        SamplingExhaustedError: no member within max_tries
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidGeneratorSpecError(f"edge probability must be in [0, 1], got {p}")
    if n < 0:
        raise InvalidGeneratorSpecError(f"vertex count must be >= 0, got {n}")
    tries = settings.random_max_tries if max_tries is None else max_tries

    rng = np.random.default_rng(seed)
    for attempt in range(1, tries + 1):
        g = sample_gnp(n, p, rng)
        if is_member(g):
            logger.info(f"Found member after {attempt} tries (n={n}, p={p}, seed={seed})")
            return g
    raise SamplingExhaustedError(n, p, seed, tries)
