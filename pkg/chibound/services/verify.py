"""
Bound verification campaigns and the tightness-example experiment.

A campaign streams labeled graphs (exhaustive) or G(n, p) samples (random),
keeps the {3K1, K1+C4}-free ones and runs the configured checks on each.
Work is split into contiguous shards whose ShardSummary values merge by an
associative fold in shard order, so serial and parallel runs produce the
same report.
"""

import json
import logging
import os
import time
from fractions import Fraction
from multiprocessing import Pool
from typing import NamedTuple, Optional

import numpy as np
from pydantic import ValidationError
from tqdm import tqdm

from chibound.core.codecs import graph6_decode, graph6_encode
from chibound.core.config import settings
from chibound.core.errors import InvalidCampaignConfigError, InvalidInputError
from chibound.core.graph import Graph, complement, remove_vertex
from chibound.core.report_store import read_jsonl, write_records
from chibound.models.schemas import (
    ALL_CHECKS,
    FAILURE_KEYS,
    BoundCheck,
    CampaignConfig,
    CampaignReport,
    CheckName,
    Coloring,
    ExtremalRecord,
    ReductionCheck,
    RemarkReport,
    RemarkRow,
    ReplayRecord,
    ShardSummary,
    ViolationRecord,
)
from chibound.services.generators import (
    cycle,
    enumerate_labeled,
    join_power,
    sample_gnp,
    shard_ranges,
    split_range,
    wheel,
)
from chibound.services.invariants import (
    matching_coloring,
    max_clique,
    optimal_coloring,
    require_within_cap,
    validate_coloring,
)
from chibound.services.recognition import (
    classify_membership,
    find_K1_plus_C4,
    is_member,
    is_three_k1_free,
    require_member,
    verify_witness,
)
from chibound.services.structure import (
    check_partition,
    check_structure,
    complement_coloring,
    lemma1_partition,
    proof_decomposition,
)

logger = logging.getLogger(__name__)

# Failure key -> campaign check that produces it
CHECK_OF_FAILURE: dict[str, CheckName] = {
    "bound": "bound", "reed": "bound", "rational": "bound",
    **{f"S{i}": "structure" for i in range(1, 8)},
    "partition": "clique_cover", "clique_cover": "clique_cover",
    "engines": "engines", "reduction": "reduction",
}


# ============================================================================
# Single-graph checks
# ============================================================================

def _bound_fields(g: Graph, omega: int, chi: int, graph6: str) -> BoundCheck:
    bound_floor = 3 * omega // 2
    reed_value = (g.max_degree + omega + 2) // 2
    return BoundCheck(
        graph6=graph6,
        n=g.n,
        max_degree=g.max_degree,
        omega=omega,
        chi=chi,
        bound_floor=bound_floor,
        reed_value=reed_value,
        bound_ok=chi <= bound_floor,
        rational_ok=2 * chi <= 3 * omega,
        reed_ok=chi <= reed_value,
        tight=chi == bound_floor,
        reed_within_bound=reed_value <= bound_floor,
    )


def check_bound(g: Graph, cap: Optional[int] = None) -> BoundCheck:
    """
    chi <= floor(3 omega / 2) and chi <= ceil((Delta + omega + 1) / 2) on a member.

    Raises:
        NotAMemberError: g contains 3K1 or K1+C4
        SizeCapExceededError: n above the cap
    """
    require_within_cap(g, "check_bound", cap)
    require_member(g, "check_bound")
    clique = max_clique(g)
    chi = len(set(optimal_coloring(g, clique)))
    return _bound_fields(g, len(clique), chi, graph6_encode(g))


def _universal_vertex(g: Graph) -> Optional[int]:
    for u in range(g.n):
        if g.degree(u) == g.n - 1:
            return u
    return None


def _reduction_fields(g: Graph, u: int, omega: int, chi: int, graph6: str) -> ReductionCheck:
    rest = remove_vertex(g, u)
    rest_clique = max_clique(rest)
    omega_without = len(rest_clique)
    chi_without = len(set(optimal_coloring(rest, rest_clique)))
    residual_member = is_member(rest)
    return ReductionCheck(
        graph6=graph6,
        universal_vertex=u,
        omega=omega,
        omega_without=omega_without,
        chi=chi,
        chi_without=chi_without,
        residual_member=residual_member,
        holds=residual_member and omega == omega_without + 1 and chi == chi_without + 1,
    )


def check_universal_reduction(g: Graph, cap: Optional[int] = None) -> Optional[ReductionCheck]:
    """
    Removing the least-index universal vertex u lowers omega and chi by exactly one.

    Returns:
        ReductionCheck, or None when g has no universal vertex

    Raises:
        NotAMemberError: g contains 3K1 or K1+C4
    """
    require_within_cap(g, "check_universal_reduction", cap)
    require_member(g, "check_universal_reduction")
    u = _universal_vertex(g)
    if u is None:
        return None
    clique = max_clique(g)
    chi = len(set(optimal_coloring(g, clique)))
    return _reduction_fields(g, u, len(clique), chi, graph6_encode(g))


# ============================================================================
# Per-graph scan
# ============================================================================

def _ratio(chi: int, bound_floor: int) -> Fraction:
    return Fraction(chi, bound_floor)


def _record_failure(summary: ShardSummary, key: str, g: Graph, graph6: str, detail: dict) -> None:
    summary.claim_failures[key] += 1
    summary.violations.append(ViolationRecord(check=key, graph6=graph6, n=g.n, detail=detail))
    logger.warning(f"Violation {key} on {graph6}: {detail}")


def _ordered_non_edges(g: Graph) -> list[tuple[int, int]]:
    pairs = []
    for v, w in g.non_edges():
        pairs.append((v, w))
        pairs.append((w, v))
    return sorted(pairs)


def _scan_structure(g: Graph, omega: int, summary: ShardSummary, graph6: str) -> None:
    """S1..S7 on the default decomposition, then on every other ordered non-adjacent pair."""
    default = proof_decomposition(g, force=True)
    default_pair = (default.v, default.w)
    pairs = [default_pair] + [p for p in _ordered_non_edges(g) if p != default_pair]
    for pair in pairs:
        d = default if pair == default_pair else proof_decomposition(g, pair=pair, force=True)
        report = check_structure(g, d, omega)
        for claim in report.failed():
            if claim == "S7" and pair != default_pair and not report.v_is_max_degree:
                continue
            detail = {
                "claim": claim,
                "v": d.v,
                "w": d.w,
                "counterexample": report.claims[claim].counterexample,
            }
            _record_failure(summary, claim, g, graph6, detail)


def _scan_clique_cover(g: Graph, omega: int, summary: ShardSummary, graph6: str) -> None:
    """Partition soundness and the complement colouring for every ordered non-adjacent pair."""
    pairs: list[Optional[tuple[int, int]]] = _ordered_non_edges(g) or [None]
    flipped = complement(g)
    for pair in pairs:
        anchor = list(pair) if pair else None
        partition = lemma1_partition(g, pair=pair, check_membership=False)
        issues = check_partition(g, partition, omega)
        if issues:
            _record_failure(summary, "partition", g, graph6, {"anchor": anchor, "issues": issues})
        coloring = complement_coloring(partition, g.n)
        if not validate_coloring(flipped, coloring) or coloring.num_colors > 4:
            detail = {"anchor": anchor, "parts": partition.parts}
            _record_failure(summary, "clique_cover", g, graph6, detail)


def scan_graph(
    g: Graph,
    checks: tuple[CheckName, ...] | list[CheckName] = ALL_CHECKS,
    summary: Optional[ShardSummary] = None,
) -> ShardSummary:
    """
    Run the configured checks on one graph, accumulating into summary.

    Non-3K1-free graphs are only counted. Engine agreement is checked on every
    3K1-free graph; the remaining checks need membership.
    """
    summary = ShardSummary() if summary is None else summary
    summary.graphs_scanned += 1
    if not is_three_k1_free(g):
        return summary
    summary.three_k1_free += 1

    graph6 = graph6_encode(g)
    clique = max_clique(g)
    omega = len(clique)
    color = optimal_coloring(g, clique)
    chi = len(set(color))

    if "engines" in checks:
        matched = matching_coloring(g)
        chi_matching = len(set(matched))
        proper = validate_coloring(g, Coloring(color=color)) and validate_coloring(
            g, Coloring(color=matched)
        )
        if chi_matching != chi or not proper:
            _record_failure(
                summary, "engines", g, graph6,
                {"chi_bb": chi, "chi_matching": chi_matching, "proper": proper},
            )

    if find_K1_plus_C4(g) is not None:
        return summary
    summary.members_found += 1
    summary.members_by_n[g.n] = summary.members_by_n.get(g.n, 0) + 1

    bound = _bound_fields(g, omega, chi, graph6)
    if "bound" in checks:
        detail = bound.model_dump(exclude={"graph6"})
        if not bound.bound_ok:
            _record_failure(summary, "bound", g, graph6, detail)
        if not bound.reed_ok:
            _record_failure(summary, "reed", g, graph6, detail)
        if not bound.rational_ok:
            _record_failure(summary, "rational", g, graph6, detail)
        # Only claimed when no vertex is universal
        if g.max_degree < g.n - 1 and not bound.reed_within_bound:
            summary.reed_within_bound_failures += 1

    if bound.bound_floor > 0:
        _offer_extremal(summary, ExtremalRecord(
            n=g.n,
            graph6=graph6,
            omega=omega,
            chi=chi,
            bound_floor=bound.bound_floor,
            ratio=str(_ratio(chi, bound.bound_floor)),
            ratio_value=float(_ratio(chi, bound.bound_floor)),
        ))

    if "structure" in checks and not g.is_complete():
        _scan_structure(g, omega, summary, graph6)

    if "clique_cover" in checks and g.n > 0:
        _scan_clique_cover(g, omega, summary, graph6)

    if "reduction" in checks:
        u = _universal_vertex(g)
        if u is not None:
            summary.reductions_checked += 1
            reduction = _reduction_fields(g, u, omega, chi, graph6)
            if not reduction.holds:
                _record_failure(
                    summary, "reduction", g, graph6, reduction.model_dump(exclude={"graph6"})
                )
    return summary


def _offer_extremal(summary: ShardSummary, candidate: ExtremalRecord) -> None:
    """Keep the first record in scan order with the largest ratio for its n."""
    current = summary.extremal.get(candidate.n)
    if current is None or _ratio(candidate.chi, candidate.bound_floor) > _ratio(
        current.chi, current.bound_floor
    ):
        summary.extremal[candidate.n] = candidate


def merge_summaries(left: ShardSummary, right: ShardSummary) -> ShardSummary:
    """Associative merge; left precedes right in scan order."""
    merged = left.model_copy(deep=True)
    merged.graphs_scanned += right.graphs_scanned
    merged.three_k1_free += right.three_k1_free
    merged.members_found += right.members_found
    for n, count in right.members_by_n.items():
        merged.members_by_n[n] = merged.members_by_n.get(n, 0) + count
    for key, count in right.claim_failures.items():
        merged.claim_failures[key] = merged.claim_failures.get(key, 0) + count
    merged.reed_within_bound_failures += right.reed_within_bound_failures
    merged.reductions_checked += right.reductions_checked
    merged.violations.extend(right.violations)
    for record in right.extremal.values():
        _offer_extremal(merged, record)
    return merged


# ============================================================================
# Campaign
# ============================================================================

class ShardTask(NamedTuple):
    mode: str
    n: int
    start: int
    stop: int
    p: float
    seed: int
    checks: tuple[CheckName, ...]
    enumeration_cap: int


def sample_indexed(n: int, p: float, seed: int, index: int) -> Graph:
    """Sample `index` at size n; its stream depends only on (seed, n, index)."""
    return sample_gnp(n, p, np.random.default_rng([seed, n, index]))


def run_shard(task: ShardTask) -> ShardSummary:
    summary = ShardSummary()
    if task.mode == "exhaustive":
        graphs = enumerate_labeled(task.n, task.start, task.stop, cap=task.enumeration_cap)
    else:
        indices = range(task.start, task.stop)
        graphs = (sample_indexed(task.n, task.p, task.seed, i) for i in indices)
    for g in graphs:
        scan_graph(g, task.checks, summary)
    return summary


def build_campaign_config(**fields) -> CampaignConfig:
    """Validate campaign parameters, mapping pydantic errors to InvalidCampaignConfigError."""
    try:
        return CampaignConfig(**fields)
    except ValidationError as e:
        raise InvalidCampaignConfigError(f"invalid campaign config: {e.errors()[0]['msg']}") from e


def plan_shards(cfg: CampaignConfig) -> list[ShardTask]:
    shards = cfg.shards_per_n or settings.shards_per_n
    cap = cfg.enumeration_cap if cfg.enumeration_cap is not None else settings.enumeration_cap
    checks = tuple(cfg.checks)
    tasks = []
    for n in range(cfg.min_n, cfg.max_n + 1):
        if cfg.mode == "exhaustive":
            ranges = shard_ranges(n, shards)
        else:
            ranges = split_range(cfg.count, shards)
        tasks.extend(ShardTask(cfg.mode, n, a, b, cfg.p, cfg.seed, checks, cap) for a, b in ranges)
    return tasks


def _resolve_workers(cfg: CampaignConfig) -> int:
    workers = cfg.workers if cfg.workers is not None else settings.workers
    return workers or os.cpu_count() or 1


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """
    Run a verification campaign and optionally write it as JSONL.

    The output file holds the extremal records, then the violations, then the
    summary. Extremal records are written once per n, the final record left
    after the shard merge; intermediate improvements are never emitted.
    Without record_timings the output depends only on cfg.

    Raises:
        InvalidCampaignConfigError: random-mode sizes above the size cap
        OSError: the output file cannot be written
    """
    if cfg.mode == "random" and cfg.max_n > settings.size_cap:
        raise InvalidCampaignConfigError(
            f"random mode needs max_n <= size cap {settings.size_cap}, got {cfg.max_n}"
        )
    started = time.perf_counter()
    tasks = plan_shards(cfg)
    workers = min(_resolve_workers(cfg), len(tasks))
    logger.info(
        f"Campaign start: {cfg.mode} n={cfg.min_n}..{cfg.max_n}, "
        f"{len(tasks)} shards, {workers} workers, checks={cfg.checks}"
    )

    total = ShardSummary()
    progress = tqdm(total=len(tasks), desc="shards", disable=not settings.progress)
    if workers <= 1:
        for task in tasks:
            total = merge_summaries(total, run_shard(task))
            progress.update()
    else:
        with Pool(workers) as pool:
            for part in pool.imap(run_shard, tasks):
                total = merge_summaries(total, part)
                progress.update()
    progress.close()

    extremal = [total.extremal[n] for n in sorted(total.extremal)]
    best = max(extremal, key=lambda r: _ratio(r.chi, r.bound_floor), default=None)
    best_ratio = _ratio(best.chi, best.bound_floor) if best else None
    report = CampaignReport(
        mode=cfg.mode,
        min_n=cfg.min_n,
        max_n=cfg.max_n,
        checks=cfg.checks,
        graphs_scanned=total.graphs_scanned,
        three_k1_free=total.three_k1_free,
        members_found=total.members_found,
        members_by_n=dict(sorted(total.members_by_n.items())),
        violation_count=len(total.violations),
        claim_failures={key: total.claim_failures.get(key, 0) for key in FAILURE_KEYS},
        reed_within_bound_failures=total.reed_within_bound_failures,
        reductions_checked=total.reductions_checked,
        max_ratio=str(best_ratio) if best_ratio is not None else None,
        max_ratio_value=float(best_ratio) if best_ratio is not None else None,
        extremal=extremal,
        violations=total.violations,
        elapsed_seconds=round(time.perf_counter() - started, 3) if cfg.record_timings else None,
    )
    logger.info(
        f"Campaign finished: {report.graphs_scanned} scanned, {report.members_found} members, "
        f"{report.violation_count} violations"
    )

    if cfg.output is not None:
        write_records(cfg.output, [*report.extremal, *report.violations, report])
    return report


def replay_violation(record: ViolationRecord) -> Optional[ViolationRecord]:
    """
    Re-run the check that produced record on its decoded certificate.

    Returns:
        The first fresh violation with the same check and detail, else the
        first with the same check, or None when the violation does not reproduce
    """
    if record.check not in CHECK_OF_FAILURE:
        raise InvalidInputError(f"unknown check {record.check!r}")
    g = graph6_decode(record.graph6)
    fresh = [v for v in scan_graph(g, (CHECK_OF_FAILURE[record.check],)).violations
             if v.check == record.check]
    for candidate in fresh:
        if candidate.detail == record.detail:
            return candidate
    return fresh[0] if fresh else None


def replay_report(path) -> list[ReplayRecord]:
    """
    Replay every violation line of a campaign JSONL file.

    Other record types are skipped.

    Raises:
        InvalidInputError: missing file, a line that is not JSON, or a
            malformed violation record
    """
    rows = []
    for lineno, line in enumerate(read_jsonl(path), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"{path}:{lineno}: not JSON: {e.msg}") from e
        if not isinstance(data, dict) or data.get("type") != "violation":
            continue
        try:
            original = ViolationRecord.model_validate(data)
        except ValidationError as e:
            raise InvalidInputError(f"{path}:{lineno}: bad violation record: {e}") from e
        fresh = replay_violation(original)
        rows.append(ReplayRecord(
            line=lineno, original=original, fresh=fresh, identical=fresh == original
        ))
    logger.info(f"Replayed {len(rows)} violations from {path}")
    return rows


# ============================================================================
# Tightness examples
# ============================================================================

REMARK_FAMILIES = {
    "C5": lambda: cycle(5),
    "wheel5": lambda: wheel(5),
    "wheel6": lambda: wheel(6),
}


def remark_experiment(k_max: int, cap: Optional[int] = None) -> RemarkReport:
    """
    Report membership and invariants of join_power(F, m) for m = 1..k_max.

    F runs over C5 and the two wheel readings. Nothing is asserted; every
    exclusion carries a witness checked with verify_witness.

    Raises:
        InvalidInputError: k_max < 1
        SizeCapExceededError: a join power is larger than the cap
    """
    if k_max < 1:
        raise InvalidInputError(f"k_max must be >= 1, got {k_max}")

    rows = []
    for family, factor in REMARK_FAMILIES.items():
        base = factor()
        for m in range(1, k_max + 1):
            g = join_power(base, m)
            require_within_cap(g, "remark_experiment", cap)
            verdict = classify_membership(g)
            clique = max_clique(g)
            omega = len(clique)
            chi = len(set(optimal_coloring(g, clique)))
            bound_floor = 3 * omega // 2
            rows.append(RemarkRow(
                family=family,
                m=m,
                n=g.n,
                graph6=graph6_encode(g),
                member=verdict.member,
                witness=verdict.witness,
                witness_valid=verify_witness(g, verdict.witness) if verdict.witness else None,
                alpha=len(max_clique(complement(g))),
                omega=omega,
                chi=chi,
                bound_floor=bound_floor,
                tight=chi == bound_floor,
                chi_over_bound=chi > bound_floor,
            ))
            logger.debug(f"Remark {family} m={m}: omega={omega}, chi={chi}")
    return RemarkReport(k_max=k_max, rows=rows)
