"""Data models for the daisy-chain scheduler."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional

from src.errors import InstanceError

FORMAT_VERSION = 1


class Direction(Enum):
    LTR = "ltr"
    RTL = "rtl"


class PeriodPolicy(Enum):
    REJECT = "reject"
    ROUND_DOWN = "round_down"
    ROUND_NEAREST = "round_nearest"


class ViolationKind(Enum):
    PORT_CONFLICT = "port-conflict"
    NOT_NO_WAIT = "not-no-wait"
    WINDOW_VIOLATION = "window-violation"
    MISSING_REPLICATION = "missing-replication"


class OracleOutcome(Enum):
    FOUND = "found"
    EXHAUSTED_INFEASIBLE = "exhausted-infeasible"
    BUDGET_EXCEEDED = "budget-exceeded"


class IntervalModel(Enum):
    UNIFORM = "uniform"
    HUB_BIASED = "hub-biased"


def is_power_of_two(value: int) -> bool:
    return value > 0 and value & (value - 1) == 0


def port_name(tail: int, head: int) -> str:
    return f"P{tail},{head}"


# ------------------------------------------------------------------ #
#                         TOPOLOGY & STREAMS                          #
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class Topology:
    """A line of switches; link l joins switch l and switch l + 1."""

    switches: int

    def __post_init__(self):
        if self.switches < 2:
            raise InstanceError(
                "switches", f"a chain needs at least 2 switches, got {self.switches}"
            )

    @property
    def links(self) -> range:
        return range(1, self.switches)

    @property
    def link_count(self) -> int:
        return self.switches - 1

    def mirror(self, switch: int) -> int:
        return self.switches + 1 - switch

    def port(self, link: int, direction: Direction) -> str:
        """Egress port name of a normalized link in original switch indices."""
        if direction is Direction.LTR:
            return port_name(link, link + 1)
        return port_name(self.mirror(link), self.mirror(link + 1))

    def ports(self, direction: Direction) -> list[str]:
        return [self.port(link, direction) for link in self.links]


@dataclass(frozen=True)
class RawStream:
    """A stream as written in the instance document."""

    id: str
    src_switch: int
    dst_switch: int
    period: int
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "src_switch": self.src_switch,
            "dst_switch": self.dst_switch,
            "period": self.period,
            **self.extra,
        }


@dataclass(frozen=True)
class RawInstance:
    """The ingestion document: a chain length and its streams."""

    topology: Topology
    streams: tuple[RawStream, ...]
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "switches": self.topology.switches,
            "streams": [s.to_dict() for s in self.streams],
            **self.extra,
        }


@dataclass(frozen=True)
class Stream:
    """A normalized stream: a < b, power-of-two period, left-to-right travel."""

    id: str
    a: int
    b: int
    period: int
    direction: Direction = Direction.LTR
    src_switch: int = 0
    dst_switch: int = 0
    requested_period: int = 0
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def interval(self) -> tuple[int, int]:
        return (self.a, self.b - 1)

    @property
    def exponent(self) -> int:
        return self.period.bit_length() - 1

    def covers(self, link: int) -> bool:
        return self.a <= link < self.b

    def replications(self, hyperperiod: int) -> int:
        return hyperperiod // self.period

    def window(self, replication: int) -> tuple[int, int]:
        """Layers allowed for a 1-based replication index."""
        return ((replication - 1) * self.period + 1, replication * self.period)

    def to_raw(self) -> RawStream:
        return RawStream(
            id=self.id,
            src_switch=self.src_switch,
            dst_switch=self.dst_switch,
            period=self.requested_period or self.period,
            extra=dict(self.extra),
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "src_switch": self.src_switch,
            "dst_switch": self.dst_switch,
            "period": self.requested_period or self.period,
            "scheduled_period": self.period,
            "direction": self.direction.value,
            "interval": list(self.interval),
            **self.extra,
        }


@dataclass(frozen=True)
class Instance:
    """One direction of a normalized problem."""

    topology: Topology
    streams: tuple[Stream, ...] = ()
    direction: Direction = Direction.LTR

    @property
    def hyperperiod(self) -> int:
        return max((s.period for s in self.streams), default=1)

    @property
    def k_star(self) -> int:
        return self.hyperperiod.bit_length() - 1

    def level(self, k: int) -> tuple[Stream, ...]:
        """S_k: the streams whose period is 2^k."""
        return tuple(s for s in self.streams if s.exponent == k)

    def up_to(self, k: int) -> tuple[Stream, ...]:
        """S_{<=k}."""
        return tuple(s for s in self.streams if s.exponent <= k)

    def replication_count(self) -> int:
        hp = self.hyperperiod
        return sum(s.replications(hp) for s in self.streams)

    def to_dict(self) -> dict:
        return {
            "switches": self.topology.switches,
            "direction": self.direction.value,
            "hyperperiod": self.hyperperiod,
            "k_star": self.k_star,
            "streams": [s.to_dict() for s in self.streams],
        }


# ------------------------------------------------------------------ #
#                        FEASIBILITY & PARTITION                      #
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class LoadProfile:
    """Weighted per-link loads c_{k,l}; loads[0] belongs to link 1."""

    k: int
    loads: tuple[int, ...]

    def at(self, link: int) -> int:
        return self.loads[link - 1]

    def to_dict(self) -> dict:
        return {"k": self.k, "loads": list(self.loads)}


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    direction: Direction = Direction.LTR
    link: Optional[int] = None
    load: Optional[int] = None
    capacity: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict, "direction": self.direction.value}
        if not self.feasible:
            d["witness"] = {
                "link": self.link,
                "load": self.load,
                "capacity": self.capacity,
            }
        return d


@dataclass(frozen=True)
class CapacityVector:
    """Residual capacities c[l] for the top period class; values[0] is link 1."""

    values: tuple[int, ...]

    def at(self, link: int) -> int:
        return self.values[link - 1]


@dataclass(frozen=True)
class Bipartition:
    """Split of the top period class; group_a keeps the first half of the hyperperiod."""

    group_a: frozenset = frozenset()
    group_b: frozenset = frozenset()

    def to_dict(self) -> dict:
        return {"group_a": sorted(self.group_a), "group_b": sorted(self.group_b)}


# ------------------------------------------------------------------ #
#                         COLORING & SCHEDULE                         #
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class GoodColoring:
    """Layer of every replication; layers[id][i - 1] is C(v_s^i)."""

    hyperperiod: int
    layers: dict = field(default_factory=dict)

    def layer(self, stream_id: str, replication: int) -> int:
        return self.layers[stream_id][replication - 1]

    def entries(self) -> Iterator[tuple[str, int, int]]:
        for stream_id, layers in self.layers.items():
            for i, layer in enumerate(layers, 1):
                yield stream_id, i, layer

    def layers_used(self) -> int:
        return len({layer for _, _, layer in self.entries()})

    def to_dict(self) -> dict:
        return {f"{sid}#{i}": layer for sid, i, layer in self.entries()}


@dataclass(frozen=True)
class Hop:
    port: str
    slot: int

    def to_dict(self) -> dict:
        return {"port": self.port, "slot": self.slot}


@dataclass(frozen=True)
class ScheduleEntry:
    stream: str
    replication: int
    injection_time: int
    hops: tuple[Hop, ...] = ()

    def to_dict(self) -> dict:
        d = {
            "stream": self.stream,
            "replication": self.replication,
            "injection_time": self.injection_time,
        }
        if self.hops:
            d["hops"] = [h.to_dict() for h in self.hops]
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ScheduleEntry":
        return cls(
            stream=str(data["stream"]),
            replication=int(data["replication"]),
            injection_time=int(data["injection_time"]),
            hops=tuple(
                Hop(port=str(h["port"]), slot=int(h["slot"]))
                for h in data.get("hops", [])
            ),
        )


@dataclass(frozen=True)
class Schedule:
    """Injection times of one direction; slot 1 of layer 1 is the epoch."""

    hyperperiod: int
    direction: Direction
    switches: int
    entries: tuple[ScheduleEntry, ...] = ()

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "hyperperiod": self.hyperperiod,
            "direction": self.direction.value,
            "switches": self.switches,
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Schedule":
        return cls(
            hyperperiod=int(data["hyperperiod"]),
            direction=Direction(data["direction"]),
            switches=int(data["switches"]),
            entries=tuple(ScheduleEntry.from_dict(e) for e in data.get("entries", [])),
        )


@dataclass(frozen=True)
class GclEntry:
    start: int
    end: int
    gates: str

    def to_dict(self) -> dict:
        return {"interval": [self.start, self.end], "gates": self.gates}


@dataclass(frozen=True)
class GclTable:
    """Gate control list per egress port; intervals are half-open [start, end)."""

    hyperperiod: int
    ports: dict = field(default_factory=dict)

    def merge(self, other: "GclTable") -> "GclTable":
        return GclTable(
            hyperperiod=max(self.hyperperiod, other.hyperperiod),
            ports={**self.ports, **other.ports},
        )

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "ports": {
                port: [e.to_dict() for e in entries]
                for port, entries in self.ports.items()
            },
        }


# ------------------------------------------------------------------ #
#                        VALIDATION & ORACLE                          #
# ------------------------------------------------------------------ #


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    streams: tuple[str, ...]
    message: str
    link: Optional[int] = None
    slot: Optional[int] = None
    layer: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "streams": list(self.streams),
            "link": self.link,
            "slot": self.slot,
            "layer": self.layer,
            "message": self.message,
        }


@dataclass
class ValidationReport:
    """Audit result; passes exactly when no violation was recorded."""

    direction: Optional[Direction] = None
    violations: list[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def add(self, violations: list[Violation]):
        self.violations.extend(violations)

    def count(self, kind: ViolationKind) -> int:
        return sum(1 for v in self.violations if v.kind is kind)

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "direction": self.direction.value if self.direction else None,
            "verdict": self.verdict,
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class OracleResult:
    outcome: OracleOutcome
    nodes_explored: int
    coloring: Optional[GoodColoring] = None

    @property
    def found(self) -> bool:
        return self.outcome is OracleOutcome.FOUND

    def to_dict(self) -> dict:
        d = {"outcome": self.outcome.value, "nodes_explored": self.nodes_explored}
        if self.coloring is not None:
            d["coloring"] = self.coloring.to_dict()
        return d


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a random instance; the same spec always yields the same instance."""

    switches: int
    stream_count: int
    period_exponents: dict = field(default_factory=lambda: {0: 1, 1: 1, 2: 1})
    interval_model: IntervalModel = IntervalModel.UNIFORM
    seed: int = 0
    feasible_only: bool = False
    max_attempts: int = 1000
    hub_share_inbound: float = 0.5


@dataclass(frozen=True)
class BenchRow:
    """Median timings, in seconds, for one point of a benchmark sweep."""

    stream_count: int
    switches: int
    decide_time: float
    find_time: float
    validate_time: float
    total_time: float
    feasible: bool

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "stream_count": self.stream_count,
            "n": self.switches,
            "decide_time": f"{self.decide_time:.6f}",
            "find_time": f"{self.find_time:.6f}",
            "validate_time": f"{self.validate_time:.6f}",
            "total_time": f"{self.total_time:.6f}",
            "feasible": str(self.feasible).lower(),
        }
