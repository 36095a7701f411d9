"""Benchmark sweep: generation, feasibility test, coloring and audit timings."""

import csv
import logging
import statistics
import time
from dataclasses import replace
from typing import Iterable

from src.coloring import find
from src.feasibility import decide
from src.generator import generate
from src.ingest import normalize_instance
from src.models import BenchRow, GenSpec
from src.schedule import synthesize
from src.validator import validate

log = logging.getLogger(__name__)

CSV_COLUMNS = [
    "format_version",
    "stream_count",
    "n",
    "decide_time",
    "find_time",
    "validate_time",
    "total_time",
    "feasible",
]


def _run_once(spec: GenSpec, parallel: bool) -> tuple[float, float, float, bool]:
    instances = normalize_instance(generate(spec))

    started = time.perf_counter()
    verdicts = [decide(instance) for instance in instances]
    decide_time = time.perf_counter() - started
    feasible = all(v.feasible for v in verdicts)
    if not feasible:
        return decide_time, 0.0, 0.0, False

    started = time.perf_counter()
    colorings = [find(instance, parallel=parallel) for instance in instances]
    find_time = time.perf_counter() - started

    started = time.perf_counter()
    for coloring, instance in zip(colorings, instances):
        report = validate(synthesize(coloring, instance), instance)
        if not report.passed:
            raise AssertionError(
                f"benchmark schedule failed validation: {report.violations[:3]}"
            )
    validate_time = time.perf_counter() - started
    return decide_time, find_time, validate_time, True


def run_sweep(
    base: GenSpec,
    sizes: Iterable[int],
    repeats: int = 3,
    parallel: bool = False,
    warmup: bool = True,
) -> list[BenchRow]:
    """Median timings per stream count; seeds advance per repeat, never per size."""
    sizes = list(sizes)
    rows = []
    if warmup and sizes:
        _run_once(replace(base, stream_count=min(100, sizes[0])), parallel)

    for size in sizes:
        samples = []
        for rep in range(repeats):
            spec = replace(base, stream_count=size, seed=base.seed + rep)
            samples.append(_run_once(spec, parallel))
            log.info("bench size=%d rep=%d: %s", size, rep, samples[-1])

        decide_t = statistics.median(s[0] for s in samples)
        find_t = statistics.median(s[1] for s in samples)
        validate_t = statistics.median(s[2] for s in samples)
        total_t = statistics.median(s[0] + s[1] + s[2] for s in samples)
        rows.append(
            BenchRow(
                stream_count=size,
                switches=base.switches,
                decide_time=decide_t,
                find_time=find_t,
                validate_time=validate_t,
                total_time=total_t,
                feasible=all(s[3] for s in samples),
            )
        )
    return rows


def write_csv(rows: list[BenchRow], path: str):
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_dict())
