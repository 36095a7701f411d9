"""Exhaustive good-coloring search for small instances.

Exponential time. Used to certify the feasibility test and the scheduler,
never to schedule production workloads.
"""

import logging

from src.models import GoodColoring, Instance, OracleOutcome, OracleResult

log = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 10**7


def brute_force(instance: Instance, node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    """Backtrack over replications in (stream id, replication) order.

    Layers are tried in ascending order inside each window; a per-link
    per-layer occupancy table prunes conflicting choices.
    """
    if node_budget <= 0:
        raise ValueError("node_budget must be positive")

    hyperperiod = instance.hyperperiod
    streams = sorted(instance.streams, key=lambda s: s.id)
    slots = [(s, i) for s in streams for i in range(1, s.replications(hyperperiod) + 1)]
    occupied = [[False] * (hyperperiod + 1) for _ in range(instance.topology.switches)]
    chosen = [0] * len(slots)

    def fits(s, layer):
        return not any(occupied[link][layer] for link in range(s.a, s.b))

    def mark(s, layer, value):
        for link in range(s.a, s.b):
            occupied[link][layer] = value

    nodes = 0
    depth = 0
    # chosen[depth] holds the last layer tried at that depth, 0 when none yet
    while 0 <= depth < len(slots):
        s, i = slots[depth]
        lo, hi = s.window(i)
        if chosen[depth]:
            mark(s, chosen[depth], False)
        layer = max(chosen[depth] + 1, lo)
        while layer <= hi and not fits(s, layer):
            layer += 1
        nodes += 1
        if nodes > node_budget:
            log.info("oracle budget of %d nodes exhausted", node_budget)
            return OracleResult(outcome=OracleOutcome.BUDGET_EXCEEDED, nodes_explored=nodes - 1)
        if layer > hi:
            chosen[depth] = 0
            depth -= 1
            continue
        chosen[depth] = layer
        mark(s, layer, True)
        depth += 1

    if depth < 0:
        return OracleResult(outcome=OracleOutcome.EXHAUSTED_INFEASIBLE, nodes_explored=nodes)

    layers: dict[str, list[int]] = {s.id: [] for s in instance.streams}
    for (s, _), layer in zip(slots, chosen):
        layers[s.id].append(layer)
    coloring = GoodColoring(
        hyperperiod=hyperperiod, layers={sid: tuple(v) for sid, v in layers.items()}
    )
    return OracleResult(outcome=OracleOutcome.FOUND, nodes_explored=nodes, coloring=coloring)
