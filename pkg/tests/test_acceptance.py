"""Full-size runs; deselected by default, run with `pytest -m slow`."""

import numpy as np
import pytest

from chibound.core.codecs import graph6_decode, graph6_encode
from chibound.services.generators import enumerate_labeled, sample_gnp
from chibound.services.verify import build_campaign_config, run_campaign

pytestmark = pytest.mark.slow


def test_exhaustive_campaign_up_to_seven_is_clean():
    report = run_campaign(build_campaign_config(mode="exhaustive", min_n=1, max_n=7))
    assert report.graphs_scanned == sum(2 ** (n * (n - 1) // 2) for n in range(1, 8))
    assert report.violation_count == 0
    assert report.max_ratio == "1"
    assert {record.n for record in report.extremal} == set(range(1, 8))


def test_graph6_round_trips_every_graph_up_to_seven():
    for n in range(8):
        for g in enumerate_labeled(n):
            assert graph6_decode(graph6_encode(g)) == g


def test_graph6_round_trips_random_graphs_on_thirty_vertices():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        g = sample_gnp(30, 0.5, rng)
        assert graph6_decode(graph6_encode(g)) == g
