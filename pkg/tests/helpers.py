"""Instance builders and Hypothesis strategies shared by the tests."""

from dataclasses import replace
from itertools import product

from hypothesis import strategies as st

from src.feasibility import load_profile
from src.models import Bipartition, Instance, Stream, Topology


def ltr_instance(switches: int, specs) -> Instance:
    """Left-to-right instance from (a, b, period) triples; ids are s1, s2, ..."""
    streams = tuple(
        Stream(
            id=f"s{i}",
            a=a,
            b=b,
            period=p,
            src_switch=a,
            dst_switch=b,
            requested_period=p,
        )
        for i, (a, b, p) in enumerate(specs, 1)
    )
    return Instance(topology=Topology(switches=switches), streams=streams)


@st.composite
def stream_specs(draw, max_switches=6, max_streams=8, max_exponent=2):
    switches = draw(st.integers(2, max_switches))
    count = draw(st.integers(0, max_streams))
    specs = []
    for _ in range(count):
        a = draw(st.integers(1, switches - 1))
        b = draw(st.integers(a + 1, switches))
        specs.append((a, b, 1 << draw(st.integers(0, max_exponent))))
    return switches, specs


@st.composite
def instances(draw, **kwargs):
    switches, specs = draw(stream_specs(**kwargs))
    return ltr_instance(switches, specs)


def admit(switches: int, specs, max_exponent: int) -> Instance:
    """Keep streams only while every link stays within capacity."""
    scale = 1 << max_exponent
    loads = [0] * (switches + 1)
    kept = []
    for a, b, p in specs:
        weight = scale // p
        if all(loads[link] + weight <= scale for link in range(a, b)):
            for link in range(a, b):
                loads[link] += weight
            kept.append((a, b, p))
    return ltr_instance(switches, kept)


def random_feasible_instance(rng, switches: int, stream_count: int, max_exponent: int) -> Instance:
    specs = []
    for _ in range(stream_count):
        a, b = sorted(rng.sample(range(1, switches + 1), 2))
        specs.append((a, b, 1 << rng.randint(0, max_exponent)))
    return admit(switches, specs, max_exponent)


def saturate(instance: Instance) -> Instance:
    """Pad every link with single-hop hyperperiod streams until it is fully loaded."""
    hp = instance.hyperperiod
    loads = load_profile(instance, instance.k_star).loads
    specs = [(s.a, s.b, s.period) for s in instance.streams]
    for link, load in enumerate(loads, 1):
        specs.extend([(link, link + 1, hp)] * (hp - load))
    return ltr_instance(instance.topology.switches, specs)


@st.composite
def feasible_instances(draw, max_switches=6, max_streams=10, max_exponent=3):
    switches, specs = draw(stream_specs(max_switches, max_streams, max_exponent))
    return admit(switches, specs, max_exponent)


@st.composite
def link_intervals(draw, max_link=10, max_size=12):
    def interval(lo):
        return st.integers(lo, max_link).map(lambda hi: (lo, hi))

    return draw(
        st.lists(st.integers(1, max_link).flatmap(interval), max_size=max_size)
    )


# Saturated: every link of the chain is busy in every slot of the hyperperiod.
SATURATED = (4, [(1, 4, 2), (1, 4, 4), (1, 2, 4), (2, 4, 4)])


@st.composite
def equal_period_instances(draw, max_switches=8, max_streams=12, exponent=2):
    switches, specs = draw(stream_specs(max_switches, max_streams, 0))
    period = 1 << exponent
    return admit(switches, [(a, b, period) for a, b, _ in specs], exponent)


@st.composite
def spans_with_capacities(draw, max_links=4, max_spans=6, max_capacity=3):
    """Half-open link spans (a, b) plus one capacity per link."""
    links = draw(st.integers(1, max_links))
    spans = draw(
        st.lists(
            st.integers(1, links).flatmap(
                lambda a: st.integers(a + 1, links + 1).map(lambda b: (a, b))
            ),
            max_size=max_spans,
        )
    )
    capacities = draw(st.lists(st.integers(0, max_capacity), min_size=links, max_size=links))
    return spans, capacities


def fits(spans: dict, group, capacities) -> bool:
    for link, capacity in enumerate(capacities, 1):
        if sum(1 for k in group if spans[k][0] <= link < spans[k][1]) > capacity:
            return False
    return True


def valid_partitions(spans: dict, capacities) -> set[frozenset]:
    """Every group a, by enumeration, for which both groups fit the capacities."""
    keys = list(spans)
    valid = set()
    for bits in product((0, 1), repeat=len(keys)):
        group_a = frozenset(k for k, bit in zip(keys, bits) if bit == 0)
        if fits(spans, group_a, capacities) and fits(spans, set(keys) - group_a, capacities):
            valid.add(group_a)
    return valid


def halves(instance: Instance, split: Bipartition) -> tuple[Instance, Instance]:
    """Low streams plus one group of the top class at half its period, per group."""
    k_star = instance.k_star
    low = [s for s in instance.streams if s.exponent < k_star]

    def relabel(group):
        top = [replace(s, period=s.period // 2) for s in instance.streams if s.id in group]
        return Instance(topology=instance.topology, streams=tuple(low + top))

    return relabel(split.group_a), relabel(split.group_b)
