"""Large randomized sweeps; deselected by default, run with ``pytest -m slow``."""

import random
import statistics
import time
from itertools import combinations_with_replacement

import pytest
from hypothesis import given, settings

from src.bench import run_sweep
from src.coloring import find
from src.feasibility import decide
from src.generator import generate
from src.ingest import normalize_instance
from src.models import GenSpec, IntervalModel, OracleOutcome
from src.oracle import brute_force
from src.partition import (
    balanced_bipartition,
    pointwise_discrepancy,
    residual_capacities,
    split_top_level,
)
from src.schedule import synthesize
from src.validator import validate
from tests.helpers import (
    halves,
    instances,
    ltr_instance,
    random_feasible_instance,
    valid_partitions,
)

pytestmark = pytest.mark.slow


class TestOracleEquivalence:
    @settings(max_examples=5000, deadline=None)
    @given(instances(max_switches=6, max_streams=8, max_exponent=2))
    def test_random_instances(self, instance):
        result = brute_force(instance)
        assert result.outcome is not OracleOutcome.BUDGET_EXCEEDED
        assert result.found == decide(instance).feasible

    def test_all_instances_on_three_switches(self):
        kinds = [(a, b, p) for a, b in ((1, 2), (2, 3), (1, 3)) for p in (1, 2)]
        for size in range(0, 5):
            for specs in combinations_with_replacement(kinds, size):
                instance = ltr_instance(3, specs)
                assert brute_force(instance).found == decide(instance).feasible, specs


class TestRoundTrip:
    def test_random_feasible_instances(self):
        rng = random.Random(2024)
        for _ in range(1000):
            switches = rng.randint(2, 32)
            instance = random_feasible_instance(rng, switches, rng.randint(0, 2000), 6)
            schedule = synthesize(find(instance), instance)
            report = validate(schedule, instance)
            assert report.passed, report.violations[:3]


class TestPartitionAtScale:
    def test_discrepancy(self):
        rng = random.Random(7)
        for _ in range(10_000):
            size = int(10 ** rng.uniform(0, 4))
            intervals = []
            for _ in range(size):
                lo = rng.randint(1, 200)
                intervals.append((lo, rng.randint(lo, 200)))
            assert pointwise_discrepancy(intervals, balanced_bipartition(intervals)) <= 1

    def test_split_on_every_sub_instance(self):
        rng = random.Random(12)
        checked = 0
        for _ in range(2000):
            pending = [random_feasible_instance(rng, rng.randint(2, 8), rng.randint(0, 14), 3)]
            while pending:
                instance = pending.pop()
                if instance.k_star == 0:
                    continue
                capacities = residual_capacities(instance)
                split = split_top_level(instance, capacities)
                top = instance.level(instance.k_star)
                if len(top) <= 12:
                    spans = {s.id: (s.a, s.b) for s in top}
                    assert split.group_a in valid_partitions(spans, capacities.values)
                    checked += 1
                pending.extend(halves(instance, split))
        assert checked >= 2000


class TestScaling:
    def test_decide_is_fast_and_near_linear(self):
        medians = []
        for count in (10_000, 20_000, 40_000):
            raw = generate(GenSpec(switches=32, stream_count=count, seed=count))
            ltr, rtl = normalize_instance(raw)
            samples = []
            for _ in range(7):
                started = time.perf_counter()
                decide(ltr)
                decide(rtl)
                samples.append(time.perf_counter() - started)
            medians.append(statistics.median(samples))
        assert medians[-1] < 1.0
        # doubling the input may cost at most 1.3x more than the doubling itself
        for before, after in zip(medians, medians[1:]):
            assert after / before <= 2 * 1.3, medians

    def test_monotone_total_time(self):
        base = GenSpec(
            switches=32,
            stream_count=0,
            period_exponents={k: 1 for k in range(10, 15)},
            feasible_only=True,
        )
        rows = run_sweep(base, [1000, 2000, 4000], repeats=3)
        assert all(r.feasible for r in rows)
        assert rows[0].total_time <= rows[2].total_time

    def test_forty_five_thousand_streams(self):
        spec = GenSpec(
            switches=32,
            stream_count=45_000,
            period_exponents={14: 1, 15: 1, 16: 1},
            feasible_only=True,
            seed=45,
        )
        started = time.perf_counter()
        for instance in normalize_instance(generate(spec)):
            assert validate(synthesize(find(instance), instance), instance).passed
        assert time.perf_counter() - started < 30 * 60

    def test_hub_biased_bench_point_is_recorded(self):
        base = GenSpec(
            switches=32,
            stream_count=0,
            period_exponents={k: 1 for k in range(11)},
            interval_model=IntervalModel.HUB_BIASED,
        )
        (row,) = run_sweep(base, [45_000], repeats=1, warmup=False)
        assert row.stream_count == 45_000
        assert not row.feasible
