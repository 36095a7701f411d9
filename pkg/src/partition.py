"""Balanced two-coloring of intervals and the top-period split.

The split needs an integer point of {A(1-x) <= c, Ax <= c, 0 <= x <= 1}
where A is the link/stream incidence matrix. A has consecutive ones, so a
coloring whose two classes differ by at most one at every link meets both
constraints whenever ceil(d/2) <= c. Such a coloring comes from orienting an
Eulerian circuit of the endpoint multigraph: every link cut is crossed as
often left-to-right as right-to-left.
"""

import logging
from typing import Hashable, Iterable, Sequence

import networkx as nx

from src.errors import InternalInvariantError, PreconditionError
from src.feasibility import sweep
from src.models import Bipartition, CapacityVector, Instance

log = logging.getLogger(__name__)

GROUP_A = 0
GROUP_B = 1


def balanced_bipartition(intervals: Sequence[tuple[int, int]]) -> list[int]:
    """Two-color closed link intervals [lo, hi] with pointwise discrepancy <= 1.

    Returns one color per interval, in input order: 0 for group a, 1 for group b.
    """
    if not intervals:
        return []

    order = sorted(range(len(intervals)), key=lambda i: (intervals[i], i))
    graph = nx.MultiGraph()
    coords = sorted({c for lo, hi in intervals for c in (lo, hi + 1)})
    graph.add_nodes_from(coords)
    for i in order:
        lo, hi = intervals[i]
        graph.add_edge(lo, hi + 1, key=i)

    # pairing odd vertices in ascending order puts at most one dummy across any cut
    odd = [v for v in coords if graph.degree(v) % 2 == 1]
    for j in range(0, len(odd), 2):
        graph.add_edge(odd[j], odd[j + 1], key=-1 - j // 2)

    colors = [GROUP_A] * len(intervals)
    components = sorted(nx.connected_components(graph), key=min)
    for component in components:
        sub = graph.subgraph(component)
        if sub.number_of_edges() == 0:
            continue
        for u, v, key in nx.eulerian_circuit(sub, source=min(component), keys=True):
            if key < 0:
                continue
            colors[key] = GROUP_A if u < v else GROUP_B

    # the leftmost interval always lands in group a
    if colors[order[0]] == GROUP_B:
        colors = [1 - c for c in colors]
    return colors


def pointwise_discrepancy(
    intervals: Sequence[tuple[int, int]], colors: Sequence[int]
) -> int:
    """Largest per-link difference between the coverage of the two color classes."""
    if not intervals:
        return 0
    top = max(hi for _, hi in intervals)
    signed = sweep(
        top,
        ((lo, hi + 1, 1 if c == GROUP_A else -1) for (lo, hi), c in zip(intervals, colors)),
    )
    return max((abs(x) for x in signed), default=0)


def residual_capacities(instance: Instance) -> CapacityVector:
    """c[l] = 2^{k*-1} - c_{k*-1,l} over S_{<=k*-1}."""
    spans = ((s.a, s.b, s.exponent) for s in instance.streams)
    return capacities_for(spans, instance.k_star, instance.topology.link_count)


def capacities_for(
    spans: Iterable[tuple[int, int, int]], k_star: int, link_count: int
) -> CapacityVector:
    """Residual capacities left by the (a, b, exponent) spans below the top class."""
    if k_star == 0:
        raise PreconditionError("residual capacities need k* >= 1")
    half = 1 << (k_star - 1)
    low = sweep(
        link_count,
        ((a, b, 1 << (k_star - 1 - e)) for a, b, e in spans if e < k_star),
    )
    return CapacityVector(values=tuple(half - load for load in low))


def bipartition_spans(
    keys: Sequence[Hashable],
    spans: Sequence[tuple[int, int]],
    capacities: Sequence[int],
) -> tuple[list, list]:
    """Split spans (a, b) over capacities; returns the keys of group a and group b.

    Spans are visited in (a, b, key) order so equal input always gives equal output.
    """
    link_count = len(capacities)
    demand = sweep(link_count, ((a, b, 1) for a, b in spans))
    for link, (d, c) in enumerate(zip(demand, capacities), 1):
        if 2 * c < d:
            raise PreconditionError(
                f"link {link}: top-period demand {d} exceeds twice the residual "
                f"capacity {c}"
            )

    order = sorted(range(len(spans)), key=lambda i: (spans[i][0], spans[i][1], keys[i]))
    colors = balanced_bipartition([(spans[i][0], spans[i][1] - 1) for i in order])
    group_a = [keys[i] for i, c in zip(order, colors) if c == GROUP_A]
    group_b = [keys[i] for i, c in zip(order, colors) if c == GROUP_B]

    for name, color in (("a", GROUP_A), ("b", GROUP_B)):
        cover = sweep(
            link_count,
            ((spans[i][0], spans[i][1], 1) for i, c in zip(order, colors) if c == color),
        )
        for link, (x, c) in enumerate(zip(cover, capacities), 1):
            if x > c:
                raise InternalInvariantError(
                    f"group {name} covers link {link} {x} times, capacity {c}"
                )
    return group_a, group_b


def split_top_level(instance: Instance, capacities: CapacityVector) -> Bipartition:
    """Partition S_{k*} so that each group fits the residual capacities."""
    top = instance.level(instance.k_star)
    group_a, group_b = bipartition_spans(
        [s.id for s in top], [(s.a, s.b) for s in top], capacities.values
    )
    split = Bipartition(group_a=frozenset(group_a), group_b=frozenset(group_b))
    log.debug("split at k*=%d: %s", instance.k_star, split.to_dict())
    return split
