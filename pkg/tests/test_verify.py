"""Bound checks, campaigns, violation replay and the tightness examples."""

import json

import pytest

from chibound.core.codecs import graph6_decode
from chibound.core.errors import InvalidCampaignConfigError, InvalidInputError, NotAMemberError
from chibound.models.schemas import ViolationRecord
from chibound.services import verify
from chibound.services.generators import complete, cycle
from chibound.services.recognition import is_member
from chibound.services.verify import (
    build_campaign_config,
    check_bound,
    check_universal_reduction,
    merge_summaries,
    plan_shards,
    remark_experiment,
    replay_report,
    replay_violation,
    run_campaign,
    run_shard,
    scan_graph,
)
from conftest import all_graphs


# ============================================================================
# Single graphs
# ============================================================================

def test_c5_is_tight(c5):
    check = check_bound(c5)
    assert (check.omega, check.chi, check.bound_floor) == (2, 3, 3)
    assert check.bound_ok and check.tight and check.rational_ok
    assert check.reed_value == 3
    assert check.graph6 == "Dhc"


def test_complete_graph_is_not_tight():
    check = check_bound(complete(6))
    assert (check.omega, check.chi, check.bound_floor) == (6, 6, 9)
    assert check.bound_ok and not check.tight


def test_c5_plus_apex(c5_plus_apex):
    check = check_bound(c5_plus_apex)
    assert (check.omega, check.chi, check.bound_floor) == (3, 4, 4)
    assert check.tight
    # Delta = n - 1 here, so the degree bound exceeds floor(3 omega / 2)
    assert check.reed_value == 5
    assert not check.reed_within_bound


def test_check_bound_rejects_non_members(k1_plus_c4):
    with pytest.raises(NotAMemberError):
        check_bound(k1_plus_c4)


def test_universal_reduction(c5_plus_apex, c5):
    reduction = check_universal_reduction(c5_plus_apex)
    assert reduction.universal_vertex == 5
    assert (reduction.omega, reduction.omega_without) == (3, 2)
    assert (reduction.chi, reduction.chi_without) == (4, 3)
    assert reduction.residual_member and reduction.holds
    assert check_universal_reduction(c5) is None


# ============================================================================
# Campaigns
# ============================================================================

def _exhaustive(**overrides):
    fields = {"mode": "exhaustive", "min_n": 1, "max_n": 5, "workers": 1, "shards_per_n": 4}
    fields.update(overrides)
    return build_campaign_config(**fields)


def test_exhaustive_n5_scans_every_labeled_graph():
    report = run_campaign(_exhaustive(min_n=5))
    assert report.graphs_scanned == 1024
    assert report.members_found == sum(1 for g in all_graphs(5) if is_member(g))
    assert report.violation_count == 0
    assert report.clean


def test_exhaustive_up_to_five():
    report = run_campaign(_exhaustive())
    assert report.graphs_scanned == 1 + 2 + 8 + 64 + 1024
    assert report.violations == []
    assert all(count == 0 for count in report.claim_failures.values())
    assert list(report.claim_failures)[:3] == ["bound", "reed", "rational"]
    assert report.reed_within_bound_failures == 0
    assert report.reductions_checked > 0
    assert report.max_ratio == "1"
    assert report.max_ratio_value == 1.0
    assert report.elapsed_seconds is None

    extremal = {record.n: record for record in report.extremal}
    five = graph6_decode(extremal[5].graph6)
    assert (five.m, five.max_degree, extremal[5].chi, extremal[5].omega) == (5, 2, 3, 2)
    assert is_member(five)


def test_parallel_and_serial_runs_agree():
    serial = run_campaign(_exhaustive(max_n=4))
    parallel = run_campaign(_exhaustive(max_n=4, workers=2, shards_per_n=3))
    assert serial.model_dump_json() == parallel.model_dump_json()


def test_merge_is_associative():
    tasks = plan_shards(_exhaustive(min_n=4, max_n=4, shards_per_n=3))
    a, b, c = (run_shard(task) for task in tasks)
    assert merge_summaries(merge_summaries(a, b), c) == merge_summaries(a, merge_summaries(b, c))


def test_random_campaign_is_reproducible(tmp_path):
    fields = {"mode": "random", "min_n": 8, "max_n": 9, "count": 40, "seed": 7, "workers": 1}
    first = run_campaign(build_campaign_config(**fields, output=tmp_path / "a.jsonl"))
    second = run_campaign(
        build_campaign_config(**fields, shards_per_n=5, output=tmp_path / "b.jsonl")
    )
    assert first.graphs_scanned == 80
    assert first.violation_count == 0
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()


def test_jsonl_record_order(tmp_path):
    out = tmp_path / "campaign" / "run.jsonl"
    run_campaign(_exhaustive(max_n=4, output=out))
    types = [json.loads(line)["type"] for line in out.read_text().splitlines()]
    assert types == ["extremal"] * 4 + ["summary"]


def test_timings_only_when_requested():
    assert run_campaign(_exhaustive(max_n=3, record_timings=True)).elapsed_seconds is not None


@pytest.mark.parametrize(
    "fields",
    [
        {"mode": "exhaustive", "max_n": 8},
        {"mode": "exhaustive", "min_n": 5, "max_n": 4},
        {"mode": "random", "max_n": 5, "p": 2.0},
        {"mode": "random", "max_n": 5, "checks": ["bound", "colour"]},
    ],
)
def test_invalid_campaign_configs(fields):
    with pytest.raises(InvalidCampaignConfigError):
        build_campaign_config(**fields)


def test_checks_are_put_in_canonical_order():
    cfg = build_campaign_config(mode="exhaustive", max_n=3, checks=["reduction", "bound"])
    assert cfg.checks == ["bound", "reduction"]


# ============================================================================
# Violations
# ============================================================================

@pytest.fixture
def broken_colouring(monkeypatch):
    """Pretend the exact colouring needs one colour per vertex."""
    monkeypatch.setattr(verify, "optimal_coloring", lambda g, clique=None: list(range(g.n)))


def test_violations_are_recorded_and_replay(broken_colouring, c5):
    summary = scan_graph(c5, ("bound", "engines"))
    checks = [v.check for v in summary.violations]
    assert checks == ["engines", "bound", "reed", "rational"]
    for record in summary.violations:
        assert replay_violation(record) == record
        reloaded = ViolationRecord.model_validate_json(record.model_dump_json())
        assert replay_violation(reloaded) == record


def test_campaign_with_violation_is_not_clean(broken_colouring):
    report = run_campaign(_exhaustive(min_n=5, checks=["bound"]))
    assert not report.clean
    assert report.claim_failures["bound"] > 0
    assert all(v.check in ("bound", "reed", "rational") for v in report.violations)


def test_replay_without_the_fault_reproduces_nothing():
    record = ViolationRecord(check="bound", graph6="Dhc", n=5, detail={})
    assert replay_violation(record) is None
    with pytest.raises(InvalidInputError):
        replay_violation(ViolationRecord(check="colour", graph6="Dhc", n=5))


def _faulty_campaign(monkeypatch, out):
    monkeypatch.setattr(verify, "optimal_coloring", lambda g, clique=None: list(range(g.n)))
    return run_campaign(_exhaustive(min_n=5, checks=["bound"], output=out))


def test_replay_report_reproduces_a_written_campaign(monkeypatch, tmp_path):
    out = tmp_path / "run.jsonl"
    report = _faulty_campaign(monkeypatch, out)
    rows = replay_report(out)
    assert [row.original for row in rows] == report.violations
    assert all(row.identical for row in rows)
    extremal_lines = len(report.extremal)
    assert rows[0].line == extremal_lines + 1


def test_replay_report_after_the_fault_is_gone(monkeypatch, tmp_path):
    out = tmp_path / "run.jsonl"
    report = _faulty_campaign(monkeypatch, out)
    monkeypatch.undo()
    rows = replay_report(out)
    assert len(rows) == len(report.violations) > 0
    assert all(row.fresh is None and not row.identical for row in rows)


def test_replay_report_skips_clean_runs(tmp_path):
    out = tmp_path / "run.jsonl"
    run_campaign(_exhaustive(max_n=3, output=out))
    assert replay_report(out) == []


def test_replay_report_rejects_bad_files(tmp_path):
    with pytest.raises(InvalidInputError, match="no such file"):
        replay_report(tmp_path / "absent.jsonl")
    assert not (tmp_path / "absent.jsonl").exists()

    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"type": "summary"}\nnot json\n')
    with pytest.raises(InvalidInputError, match=":2: not JSON"):
        replay_report(bad)

    bad.write_text('{"type": "violation", "check": "bound"}\n')
    with pytest.raises(InvalidInputError, match=":1: bad violation record"):
        replay_report(bad)


# ============================================================================
# Tightness examples
# ============================================================================

def test_remark_rows():
    report = remark_experiment(2)
    rows = {(row.family, row.m): row for row in report.rows}
    assert len(report.rows) == 6

    first = rows[("C5", 1)]
    assert first.member and first.tight
    assert (first.omega, first.chi, first.n) == (2, 3, 5)

    second = rows[("C5", 2)]
    assert (second.omega, second.chi) == (4, 6)
    assert not second.member
    assert second.witness.kind == "K1+C4"
    assert second.witness_valid

    wheel5 = rows[("wheel5", 1)]
    assert wheel5.member and (wheel5.omega, wheel5.chi) == (3, 4)
    assert rows[("wheel6", 1)].witness.kind == "3K1"
    assert report.witnesses_valid


def test_remark_k_max_three_witnesses_all_verify():
    report = remark_experiment(3)
    assert len(report.rows) == 9
    assert report.witnesses_valid
    assert all(row.witness_valid for row in report.rows if not row.member)


def test_remark_rejects_bad_k():
    with pytest.raises(InvalidInputError):
        remark_experiment(0)


def test_cycle_seven_is_excluded():
    assert not is_member(cycle(7))
