"""Instance ingestion, normalization and hyperperiod computation."""

import json
import logging
from typing import Iterable, Union

from src.errors import InstanceError
from src.models import (
    Direction,
    Instance,
    PeriodPolicy,
    RawInstance,
    RawStream,
    Stream,
    Topology,
    is_power_of_two,
)

log = logging.getLogger(__name__)

STREAM_FIELDS = ("id", "src_switch", "dst_switch", "period")


def load_instance(path: str) -> RawInstance:
    """Read an instance document from disk.

    Malformed JSON propagates as ``json.JSONDecodeError`` so the caller can
    report its line and column.
    """
    with open(path, "r") as f:
        text = f.read()
    return parse_instance(json.loads(text))


def _require_int(value, field: str, minimum: int = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceError(field, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise InstanceError(field, f"must be >= {minimum}, got {value}")
    return value


def parse_instance(data: dict) -> RawInstance:
    """Build a RawInstance from the decoded JSON document, keeping unknown fields."""
    if not isinstance(data, dict):
        raise InstanceError("$", "instance document must be a JSON object")
    if "switches" not in data:
        raise InstanceError("switches", "missing required field")
    switches = _require_int(data["switches"], "switches", minimum=2)
    topology = Topology(switches=switches)

    raw_streams = data.get("streams", [])
    if not isinstance(raw_streams, list):
        raise InstanceError("streams", "must be a list")

    streams = []
    seen = set()
    for idx, item in enumerate(raw_streams):
        where = f"streams[{idx}]"
        if not isinstance(item, dict):
            raise InstanceError(where, "stream must be a JSON object")
        for key in STREAM_FIELDS:
            if key not in item:
                raise InstanceError(f"{where}.{key}", "missing required field")
        stream_id = item["id"]
        if not isinstance(stream_id, str) or not stream_id:
            raise InstanceError(f"{where}.id", "must be a non-empty string")
        if stream_id in seen:
            raise InstanceError(f"{where}.id", f"duplicate stream id '{stream_id}'")
        seen.add(stream_id)

        stream = RawStream(
            id=stream_id,
            src_switch=_require_int(item["src_switch"], f"{where}.src_switch"),
            dst_switch=_require_int(item["dst_switch"], f"{where}.dst_switch"),
            period=_require_int(item["period"], f"{where}.period"),
            extra={k: v for k, v in item.items() if k not in STREAM_FIELDS},
        )
        _check_raw_stream(stream, topology, where)
        streams.append(stream)

    extra = {k: v for k, v in data.items() if k not in ("switches", "streams")}
    return RawInstance(topology=topology, streams=tuple(streams), extra=extra)


def _check_raw_stream(stream: RawStream, topology: Topology, where: str):
    n = topology.switches
    if stream.period <= 0:
        raise InstanceError(f"{where}.period", "period must be positive")
    for key in ("src_switch", "dst_switch"):
        value = getattr(stream, key)
        if not 1 <= value <= n:
            raise InstanceError(f"{where}.{key}", f"{value} is outside [1, {n}]")
    if stream.src_switch == stream.dst_switch:
        raise InstanceError(
            f"{where}.dst_switch",
            "source and destination attach to the same switch",
        )


def round_period(period: int, policy: PeriodPolicy, where: str = "period") -> int:
    """Map a period onto a power of two according to the policy."""
    if is_power_of_two(period):
        return period
    if policy is PeriodPolicy.REJECT:
        raise InstanceError(where, f"period {period} is not a power of two")
    lower = 1 << (period.bit_length() - 1)
    if policy is PeriodPolicy.ROUND_DOWN:
        return lower
    # geometric midpoint: compare p^2 against lower * upper, exact in integers
    upper = lower * 2
    return upper if period * period > lower * upper else lower


def normalize(
    topology: Topology,
    streams: Iterable[RawStream],
    policy: PeriodPolicy = PeriodPolicy.ROUND_DOWN,
) -> tuple[Instance, Instance]:
    """Split streams by direction and mirror right-to-left ones onto the ltr frame."""
    ltr, rtl = [], []
    for idx, raw in enumerate(streams):
        where = f"streams[{idx}]"
        _check_raw_stream(raw, topology, where)
        period = round_period(raw.period, policy, f"{where}.period")
        if period != raw.period:
            log.info("stream %s: period %d rounded to %d", raw.id, raw.period, period)

        if raw.src_switch < raw.dst_switch:
            direction, a, b = Direction.LTR, raw.src_switch, raw.dst_switch
        else:
            direction = Direction.RTL
            a, b = topology.mirror(raw.src_switch), topology.mirror(raw.dst_switch)

        stream = Stream(
            id=raw.id,
            a=a,
            b=b,
            period=period,
            direction=direction,
            src_switch=raw.src_switch,
            dst_switch=raw.dst_switch,
            requested_period=raw.period,
            extra=dict(raw.extra),
        )
        (ltr if direction is Direction.LTR else rtl).append(stream)

    return (
        Instance(topology=topology, streams=tuple(ltr), direction=Direction.LTR),
        Instance(topology=topology, streams=tuple(rtl), direction=Direction.RTL),
    )


def normalize_instance(
    raw: RawInstance, policy: PeriodPolicy = PeriodPolicy.ROUND_DOWN
) -> tuple[Instance, Instance]:
    return normalize(raw.topology, raw.streams, policy)


def denormalize(instance: Instance) -> list[RawStream]:
    """Inverse of normalize for the streams of one direction."""
    return [s.to_raw() for s in instance.streams]


def hyperperiod(streams: Iterable[Union[Stream, RawStream]]) -> int:
    """LCM of power-of-two periods, which is their maximum; 1 for no streams."""
    result = 1
    for s in streams:
        if not is_power_of_two(s.period):
            raise InstanceError(f"{s.id}.period", f"{s.period} is not a power of two")
        result = max(result, s.period)
    return result
