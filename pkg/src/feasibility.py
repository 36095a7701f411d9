"""Weighted link loads and the no-wait feasibility test."""

import logging
from itertools import accumulate
from typing import Iterable

from src.models import Direction, Feasibility, Instance, LoadProfile

log = logging.getLogger(__name__)


def sweep(link_count: int, spans: Iterable[tuple[int, int, int]]) -> list[int]:
    """Per-link sums of weighted spans.

    Each span is ``(a, b, weight)`` covering links a..b-1. Returns a list whose
    index 0 holds link 1. Runs a difference array in O(len(spans) + link_count).
    """
    diff = [0] * (link_count + 2)
    for a, b, weight in spans:
        diff[a] += weight
        diff[b] -= weight
    return list(accumulate(diff[1 : link_count + 1]))


def load_profile(instance: Instance, k: int) -> LoadProfile:
    """c_{k,l} = sum over i <= k of 2^(k-i) * |{s in S_i : l in I_s}|."""
    if not 0 <= k <= instance.k_star:
        raise ValueError(f"k={k} outside [0, {instance.k_star}]")
    loads = sweep(
        instance.topology.link_count,
        ((s.a, s.b, 1 << (k - s.exponent)) for s in instance.streams if s.exponent <= k),
    )
    return LoadProfile(k=k, loads=tuple(loads))


def decide(instance: Instance) -> Feasibility:
    """Feasible iff c_{k*,l} <= 2^{k*} on every link; reports the leftmost overload."""
    capacity = instance.hyperperiod
    profile = load_profile(instance, instance.k_star)
    for link, load in enumerate(profile.loads, 1):
        if load > capacity:
            log.info(
                "%s: link %d overloaded (%d > %d)",
                instance.direction.value,
                link,
                load,
                capacity,
            )
            return Feasibility(
                feasible=False,
                direction=instance.direction,
                link=link,
                load=load,
                capacity=capacity,
            )
    return Feasibility(feasible=True, direction=instance.direction)


def decide_all(ltr: Instance, rtl: Instance) -> dict[Direction, Feasibility]:
    """Both directions are scheduled separately; a network needs both to pass."""
    return {Direction.LTR: decide(ltr), Direction.RTL: decide(rtl)}
