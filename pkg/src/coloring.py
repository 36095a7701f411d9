"""Good colorings of the replication graph.

``find`` halves the hyperperiod recursively: the longest-period streams are
split between the two halves, each half is colored on its own, and the two
colorings are stitched back together. When every stream has the same period
the problem is plain interval-graph coloring and ``greedy_color`` solves it
with one sweep, using exactly max-link-load layers.
"""

import heapq
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Hashable, Iterable

from src.errors import InternalInvariantError, PreconditionError
from src.feasibility import decide, sweep
from src.models import Bipartition, GoodColoring, Instance
from src.partition import bipartition_spans, capacities_for

log = logging.getLogger(__name__)

# (ordinal, a, b, exponent); the exponent drops by one each time a stream is relabeled
Job = tuple[int, int, int, int]


def find(instance: Instance, parallel: bool = False) -> GoodColoring:
    """Good 2^{k*}-coloring of a feasible instance."""
    verdict = decide(instance)
    if not verdict.feasible:
        raise PreconditionError(
            f"instance is infeasible at link {verdict.link} "
            f"(load {verdict.load} > capacity {verdict.capacity})"
        )
    if len({s.period for s in instance.streams}) == 1:
        log.debug("single period %d, coloring greedily", instance.streams[0].period)
        return greedy_color(instance)

    jobs = [(i, s.a, s.b, s.exponent) for i, s in enumerate(instance.streams)]
    ids = tuple(s.id for s in instance.streams)
    links = instance.topology.link_count
    k_star = instance.k_star

    if parallel and k_star > 0:
        colors = _find_parallel(jobs, k_star, links, ids)
    else:
        colors = _find(jobs, k_star, links, ids)
    return _to_coloring(colors, instance)


def _to_coloring(colors: dict[int, list[int]], instance: Instance) -> GoodColoring:
    layers = {}
    for i, s in enumerate(instance.streams):
        if i not in colors:
            raise InternalInvariantError(f"stream {s.id} left uncolored")
        layers[s.id] = tuple(colors[i])
    return GoodColoring(hyperperiod=instance.hyperperiod, layers=layers)


def _split(jobs: list[Job], k_star: int, links: int, depth: int, ids: tuple[str, ...]):
    """Residual capacities and the bipartition of the top class at one level."""
    low = [j for j in jobs if j[3] < k_star]
    top = [j for j in jobs if j[3] == k_star]
    capacities = capacities_for(((a, b, e) for _, a, b, e in low), k_star, links)
    try:
        group_a, group_b = bipartition_spans(
            [j[0] for j in top], [(j[1], j[2]) for j in top], capacities.values
        )
    except PreconditionError as exc:
        raise PreconditionError(f"depth {depth}, k*={k_star}: {exc}") from exc
    split = Bipartition(group_a=frozenset(group_a), group_b=frozenset(group_b))
    if log.isEnabledFor(logging.DEBUG):
        log.debug(
            "depth %d k*=%d: %d low, capacities %s, group a %s, group b %s",
            depth,
            k_star,
            len(low),
            list(capacities.values),
            sorted(ids[o] for o in split.group_a),
            sorted(ids[o] for o in split.group_b),
        )
    return low, top, split


def _relabel(low: list[Job], top: list[Job], group: frozenset) -> list[Job]:
    return low + [(o, a, b, e - 1) for o, a, b, e in top if o in group]


def _find(
    jobs: list[Job], k_star: int, links: int, ids: tuple[str, ...], depth: int = 0
) -> dict[int, list[int]]:
    if not jobs:
        return {}
    if k_star == 0:
        return _base_case(jobs, links)

    low, top, split = _split(jobs, k_star, links, depth, ids)
    colors_a = _find(_relabel(low, top, split.group_a), k_star - 1, links, ids, depth + 1)
    if top:
        colors_b = _find(
            _relabel(low, top, split.group_b), k_star - 1, links, ids, depth + 1
        )
    else:
        # both halves hold exactly the same streams
        colors_b = colors_a
    return _merge(colors_a, colors_b, [o for o, *_ in low], split, 1 << (k_star - 1))


def _find_parallel(
    jobs: list[Job], k_star: int, links: int, ids: tuple[str, ...]
) -> dict[int, list[int]]:
    low, top, split = _split(jobs, k_star, links, 0, ids)
    with ProcessPoolExecutor(max_workers=2) as pool:
        future_a = pool.submit(
            _find, _relabel(low, top, split.group_a), k_star - 1, links, ids, 1
        )
        future_b = pool.submit(
            _find, _relabel(low, top, split.group_b), k_star - 1, links, ids, 1
        )
        colors_a, colors_b = future_a.result(), future_b.result()
    return _merge(colors_a, colors_b, [o for o, *_ in low], split, 1 << (k_star - 1))


def _base_case(jobs: list[Job], links: int) -> dict[int, list[int]]:
    """Hyperperiod 1: every replication takes layer 1."""
    if any(e != 0 for *_, e in jobs):
        raise InternalInvariantError("period above 1 at hyperperiod 1")
    if log.isEnabledFor(logging.DEBUG):
        loads = sweep(links, ((a, b, 1) for _, a, b, _ in jobs))
        if any(x > 1 for x in loads):
            raise InternalInvariantError(f"base case link loads {loads} exceed 1")
    return {o: [1] for o, *_ in jobs}


def _merge(
    colors_a: dict,
    colors_b: dict,
    low: Iterable[Hashable],
    split: Bipartition,
    half: int,
) -> dict:
    """Low streams keep both halves; the top class keeps the one half it was given."""
    merged = {}
    try:
        for key in low:
            merged[key] = list(colors_a[key]) + [c + half for c in colors_b[key]]
        for key in split.group_a:
            merged[key] = [colors_a[key][0]]
        for key in split.group_b:
            merged[key] = [colors_b[key][0] + half]
    except KeyError as exc:
        raise InternalInvariantError(f"half coloring misses stream {exc.args[0]}") from exc
    return merged


def merge(
    coloring_a: GoodColoring,
    coloring_b: GoodColoring,
    split: Bipartition,
    instance: Instance,
) -> GoodColoring:
    """Combine good colorings of the two halves into one over twice their hyperperiod.

    ``coloring_a`` and ``coloring_b`` are keyed by stream id, with the streams of
    ``split`` relabeled to the halved period.
    """
    half = coloring_a.hyperperiod
    if coloring_b.hyperperiod != half:
        raise PreconditionError(
            f"halves disagree on hyperperiod ({half} vs {coloring_b.hyperperiod})"
        )
    top = split.group_a | split.group_b
    low = [s.id for s in instance.streams if s.id not in top]
    merged = _merge(coloring_a.layers, coloring_b.layers, low, split, half)
    layers = {s.id: tuple(merged[s.id]) for s in instance.streams if s.id in merged}
    return GoodColoring(hyperperiod=2 * half, layers=layers)


def greedy_color(instance: Instance) -> GoodColoring:
    """Proper coloring when all streams share one period.

    Streams are swept by left endpoint; each takes the smallest layer released
    by an interval that already ended. Uses exactly max-link-load layers.
    """
    periods = {s.period for s in instance.streams}
    if len(periods) > 1:
        raise PreconditionError(f"greedy coloring needs one period, got {sorted(periods)}")
    if not instance.streams:
        return GoodColoring(hyperperiod=instance.hyperperiod, layers={})
    period = periods.pop()

    order = sorted(instance.streams, key=lambda s: (s.a, s.b, s.id))
    free: list[int] = []
    busy: list[tuple[int, int]] = []  # (b, layer)
    next_layer = 1
    layers = {}
    for s in order:
        while busy and busy[0][0] <= s.a:
            heapq.heappush(free, heapq.heappop(busy)[1])
        if free:
            layer = heapq.heappop(free)
        else:
            layer = next_layer
            next_layer += 1
        if layer > period:
            raise PreconditionError(
                f"{layer} layers needed at link {s.a}, only {period} available"
            )
        layers[s.id] = (layer,)
        heapq.heappush(busy, (s.b, layer))
    return GoodColoring(
        hyperperiod=period, layers={s.id: layers[s.id] for s in instance.streams}
    )


def color(instance: Instance, method: str = "recursive", parallel: bool = False) -> GoodColoring:
    """Entry used by the CLI; the greedy method only applies to equal periods."""
    if method == "greedy" and len({s.period for s in instance.streams}) <= 1:
        return greedy_color(instance)
    return find(instance, parallel=parallel)
