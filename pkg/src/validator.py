"""Independent audits of schedules and colorings.

Nothing here trusts the scheduler: layers are re-derived from injection
times and every constraint is checked from scratch.
"""

import logging
from collections import defaultdict
from typing import Callable

from src.errors import SchemaMismatchError
from src.models import (
    GoodColoring,
    Instance,
    Schedule,
    ScheduleEntry,
    ValidationReport,
    Violation,
    ViolationKind,
)
from src.schedule import layer_of, occupancy, wrap

log = logging.getLogger(__name__)


class ScheduleValidator:
    """Runs every schedule check for one direction of an instance."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.streams = {s.id: s for s in instance.streams}
        self.hyperperiod = instance.hyperperiod

    def run_all_checks(self, schedule: Schedule) -> ValidationReport:
        self.check_schema(schedule)
        report = ValidationReport(direction=schedule.direction)

        checks: list[tuple[str, Callable[[Schedule], list[Violation]]]] = [
            ("Replication Count", self.check_replication_counts),
            ("Replication Windows", self.check_windows),
            ("Egress Port Exclusivity", self.check_port_exclusivity),
            ("No-Wait Forwarding", self.check_no_wait),
        ]
        for check_name, check_func in checks:
            found = check_func(schedule)
            log.debug("%s: %d violation(s)", check_name, len(found))
            report.add(found)
        return report

    def check_schema(self, schedule: Schedule):
        if schedule.direction is not self.instance.direction:
            raise SchemaMismatchError(
                f"schedule is {schedule.direction.value}, "
                f"instance is {self.instance.direction.value}"
            )
        if schedule.switches != self.instance.topology.switches:
            raise SchemaMismatchError(
                f"schedule has {schedule.switches} switches, "
                f"instance has {self.instance.topology.switches}"
            )
        if schedule.entries and schedule.hyperperiod != self.hyperperiod:
            raise SchemaMismatchError(
                f"schedule hyperperiod {schedule.hyperperiod} != {self.hyperperiod}"
            )
        unknown = sorted({e.stream for e in schedule.entries} - set(self.streams))
        if unknown:
            raise SchemaMismatchError(f"unknown stream id(s): {unknown}")

    def check_replication_counts(self, schedule: Schedule) -> list[Violation]:
        seen = defaultdict(list)
        for e in schedule.entries:
            seen[e.stream].append(e.replication)

        violations = []
        for s in self.instance.streams:
            expected = s.replications(self.hyperperiod)
            got = seen.get(s.id, [])
            if sorted(got) != list(range(1, expected + 1)):
                violations.append(
                    Violation(
                        kind=ViolationKind.MISSING_REPLICATION,
                        streams=(s.id,),
                        message=f"expected replications 1..{expected}, "
                        f"got {sorted(got)}",
                    )
                )
        return violations

    def check_windows(self, schedule: Schedule) -> list[Violation]:
        violations = []
        for e in schedule.entries:
            s = self.streams[e.stream]
            lo, hi = s.window(e.replication)
            layer = layer_of(e.injection_time, s)
            if not lo <= layer <= hi:
                violations.append(
                    Violation(
                        kind=ViolationKind.WINDOW_VIOLATION,
                        streams=(s.id,),
                        layer=layer,
                        message=f"replication {e.replication} injected at "
                        f"{e.injection_time} (layer {layer}), window [{lo}, {hi}]",
                    )
                )
        return violations

    def check_port_exclusivity(self, schedule: Schedule) -> list[Violation]:
        cells: dict[tuple[int, int], ScheduleEntry] = {}
        violations = []
        for e in schedule.entries:
            s = self.streams[e.stream]
            for link, slot in occupancy(s, e.injection_time):
                cell = (link, wrap(slot, self.hyperperiod))
                holder = cells.setdefault(cell, e)
                if holder is not e:
                    violations.append(
                        Violation(
                            kind=ViolationKind.PORT_CONFLICT,
                            streams=(holder.stream, e.stream),
                            link=link,
                            slot=cell[1],
                            message=f"{holder.stream}#{holder.replication} and "
                            f"{e.stream}#{e.replication} share link {link} "
                            f"at slot {cell[1]}",
                        )
                    )
        return violations

    def check_no_wait(self, schedule: Schedule) -> list[Violation]:
        """Explicit hops, when given, must be the path's ports at consecutive slots."""
        topology = self.instance.topology
        violations = []
        for e in schedule.entries:
            if not e.hops:
                continue
            s = self.streams[e.stream]
            expected = [
                (topology.port(link, schedule.direction), slot)
                for link, slot in occupancy(s, e.injection_time)
            ]
            got = [(h.port, h.slot) for h in e.hops]
            if got != expected:
                violations.append(
                    Violation(
                        kind=ViolationKind.NOT_NO_WAIT,
                        streams=(s.id,),
                        slot=e.injection_time,
                        message=f"replication {e.replication} hops {got} are not "
                        f"back-to-back along its path",
                    )
                )
        return violations


def validate(schedule: Schedule, instance: Instance) -> ValidationReport:
    return ScheduleValidator(instance).run_all_checks(schedule)


def replay(schedule: Schedule, instance: Instance, hyperperiods: int = 2) -> list[tuple]:
    """Replay the schedule in absolute time and list colliding (link, time, streams).

    Enough extra cycles are simulated to cover hops that spill past the end
    of a hyperperiod.
    """
    streams = {s.id: s for s in instance.streams}
    period = schedule.hyperperiod
    spill = -(-instance.topology.switches // period)
    busy: dict[tuple[int, int], str] = {}
    conflicts = []
    for cycle in range(hyperperiods + spill):
        for e in schedule.entries:
            s = streams[e.stream]
            t = e.injection_time + cycle * period
            for hop, link in enumerate(range(s.a, s.b)):
                key = (link, t + hop)
                if key in busy:
                    conflicts.append((link, t + hop, busy[key], e.stream))
                else:
                    busy[key] = e.stream
    return conflicts


def validate_coloring(coloring: GoodColoring, instance: Instance) -> ValidationReport:
    """Goodness audit: counts, windows, and properness per layer by interval sweep."""
    report = ValidationReport(direction=instance.direction)
    hyperperiod = instance.hyperperiod
    by_layer = defaultdict(list)

    for s in instance.streams:
        layers = coloring.layers.get(s.id, ())
        expected = s.replications(hyperperiod)
        if len(layers) != expected:
            report.add(
                [
                    Violation(
                        kind=ViolationKind.MISSING_REPLICATION,
                        streams=(s.id,),
                        message=f"{len(layers)} layer(s), expected {expected}",
                    )
                ]
            )
        for i, layer in enumerate(layers, 1):
            lo, hi = s.window(i)
            if not lo <= layer <= hi:
                report.add(
                    [
                        Violation(
                            kind=ViolationKind.WINDOW_VIOLATION,
                            streams=(s.id,),
                            layer=layer,
                            message=f"replication {i} in layer {layer}, "
                            f"window [{lo}, {hi}]",
                        )
                    ]
                )
            by_layer[layer].append((s.a, s.b, s.id))

    for layer in sorted(by_layer):
        reach_end, reach_id = 0, None
        for a, b, sid in sorted(by_layer[layer]):
            if a < reach_end:
                report.add(
                    [
                        Violation(
                            kind=ViolationKind.PORT_CONFLICT,
                            streams=(reach_id, sid),
                            link=a,
                            layer=layer,
                            message=f"{reach_id} and {sid} overlap at link {a} "
                            f"in layer {layer}",
                        )
                    ]
                )
            if b > reach_end:
                reach_end, reach_id = b, sid
    return report
