"""No-wait schedules from good colorings, and their gate control lists."""

import json
import logging

from src.errors import SchemaMismatchError
from src.models import (
    FORMAT_VERSION,
    Direction,
    GclEntry,
    GclTable,
    GoodColoring,
    Hop,
    Instance,
    Schedule,
    ScheduleEntry,
    Stream,
    Topology,
)

log = logging.getLogger(__name__)

DEFAULT_QUEUES = 8


def injection_time(layer: int, stream: Stream) -> int:
    return layer + stream.a - 1


def layer_of(injection: int, stream: Stream) -> int:
    return injection - stream.a + 1


def wrap(slot: int, hyperperiod: int) -> int:
    """Reduce an absolute slot into [1, hyperperiod]."""
    return (slot - 1) % hyperperiod + 1


def occupancy(stream: Stream, injection: int) -> list[tuple[int, int]]:
    """(normalized link, absolute slot) pairs of one replication.

    Link l of the stream's path is crossed at slot injection + (l - a).
    """
    return [(link, injection + link - stream.a) for link in range(stream.a, stream.b)]


def synthesize(coloring: GoodColoring, instance: Instance) -> Schedule:
    """Turn layers into injection times, with hops named by original egress ports."""
    topology = instance.topology
    entries = []
    for s in instance.streams:
        for i, layer in enumerate(coloring.layers[s.id], 1):
            t = injection_time(layer, s)
            hops = tuple(
                Hop(port=topology.port(link, instance.direction), slot=slot)
                for link, slot in occupancy(s, t)
            )
            entries.append(
                ScheduleEntry(stream=s.id, replication=i, injection_time=t, hops=hops)
            )
    log.info(
        "%s: %d replications scheduled over hyperperiod %d",
        instance.direction.value,
        len(entries),
        coloring.hyperperiod,
    )
    return Schedule(
        hyperperiod=coloring.hyperperiod,
        direction=instance.direction,
        switches=topology.switches,
        entries=tuple(entries),
    )


def emit_gcl(schedule: Schedule, queues: int = DEFAULT_QUEUES) -> GclTable:
    """No-wait traffic never waits at a gate, so every gate stays open all cycle."""
    topology = Topology(switches=schedule.switches)
    all_open = "1" * queues
    return GclTable(
        hyperperiod=schedule.hyperperiod,
        ports={
            port: [GclEntry(start=0, end=schedule.hyperperiod, gates=all_open)]
            for port in topology.ports(schedule.direction)
        },
    )


def schedule_document(
    schedules: list[Schedule],
    instances: list[Instance],
    extra: dict = None,
    format_version: int = FORMAT_VERSION,
) -> dict:
    """Both directions in one document, echoing the streams they were built from."""
    streams = {}
    for instance in instances:
        for s in instance.streams:
            streams[s.id] = s.to_dict()
    return {
        "format_version": format_version,
        "epoch": "slot 1 is the first slot of layer 1 on link 1",
        "schedules": [s.to_dict() for s in schedules],
        "streams": streams,
        **(extra or {}),
    }


def load_schedules(path: str) -> dict[Direction, Schedule]:
    """Read a schedule document (or a bare single-direction schedule)."""
    with open(path, "r") as f:
        data = json.loads(f.read())
    return parse_schedules(data)


def parse_schedules(data: dict) -> dict[Direction, Schedule]:
    if not isinstance(data, dict):
        raise SchemaMismatchError(
            f"schedule document must be a JSON object, got {type(data).__name__}"
        )
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SchemaMismatchError(f"unsupported schedule format_version {version}")
    items = data["schedules"] if "schedules" in data else [data]
    try:
        parsed = [Schedule.from_dict(item) for item in items]
    except (AttributeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatchError(f"malformed schedule: {exc}") from exc
    result = {}
    for schedule in parsed:
        if schedule.direction in result:
            raise SchemaMismatchError(
                f"two schedules for direction {schedule.direction.value}"
            )
        result[schedule.direction] = schedule
    return result
