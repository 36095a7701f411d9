"""Seeded random instances for tests and benchmarks."""

import logging
import random

from src.errors import GenerationError
from src.feasibility import decide_all
from src.ingest import normalize_instance
from src.models import GenSpec, IntervalModel, RawInstance, RawStream, Topology

log = logging.getLogger(__name__)

HUB = 1


class InstanceGenerator:
    """Draws streams from a GenSpec; all randomness comes from ``spec.seed``."""

    def __init__(self, spec: GenSpec):
        if spec.switches < 2:
            raise ValueError("a chain needs at least 2 switches")
        if spec.stream_count < 0:
            raise ValueError("stream_count must be >= 0")
        if not spec.period_exponents:
            raise ValueError("period_exponents must not be empty")
        if spec.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.exponents = sorted(spec.period_exponents)
        self.weights = [spec.period_exponents[k] for k in self.exponents]
        self.scale = 1 << max(self.exponents)
        # loads at the largest possible hyperperiod, per direction
        self.loads = {
            "ltr": [0] * (spec.switches + 1),
            "rtl": [0] * (spec.switches + 1),
        }

    def draw_endpoints(self) -> tuple[int, int]:
        n = self.spec.switches
        if self.spec.interval_model is IntervalModel.HUB_BIASED:
            other = self.rng.randint(2, n)
            if self.rng.random() < self.spec.hub_share_inbound:
                return other, HUB
            return HUB, other
        src, dst = self.rng.sample(range(1, n + 1), 2)
        return src, dst

    def draw_period(self) -> int:
        return 1 << self.rng.choices(self.exponents, weights=self.weights)[0]

    def _fits(self, src: int, dst: int, period: int) -> bool:
        key, a, b = self._span(src, dst)
        weight = self.scale // period
        loads = self.loads[key]
        return all(loads[link] + weight <= self.scale for link in range(a, b))

    def _admit(self, src: int, dst: int, period: int):
        key, a, b = self._span(src, dst)
        weight = self.scale // period
        for link in range(a, b):
            self.loads[key][link] += weight

    def _span(self, src: int, dst: int) -> tuple[str, int, int]:
        n = self.spec.switches
        if src < dst:
            return "ltr", src, dst
        return "rtl", n + 1 - src, n + 1 - dst

    def generate(self) -> RawInstance:
        streams = []
        width = len(str(max(self.spec.stream_count - 1, 0)))
        for idx in range(self.spec.stream_count):
            for attempt in range(1, self.spec.max_attempts + 1):
                src, dst = self.draw_endpoints()
                period = self.draw_period()
                if not self.spec.feasible_only or self._fits(src, dst, period):
                    break
            else:
                raise GenerationError(
                    attempt,
                    f"stream {idx}: no feasible draw after {attempt} attempts",
                )
            if self.spec.feasible_only:
                self._admit(src, dst, period)
            streams.append(
                RawStream(
                    id=f"s{idx:0{width}d}",
                    src_switch=src,
                    dst_switch=dst,
                    period=period,
                )
            )

        instance = RawInstance(
            topology=Topology(switches=self.spec.switches),
            streams=tuple(streams),
            extra={"generator": {"seed": self.spec.seed, "model": self.spec.interval_model.value}},
        )
        if self.spec.feasible_only:
            verdicts = decide_all(*normalize_instance(instance))
            if not all(v.feasible for v in verdicts.values()):
                raise GenerationError(self.spec.max_attempts, "generated instance is infeasible")
        log.info("generated %d streams on %d switches", len(streams), self.spec.switches)
        return instance


def generate(spec: GenSpec) -> RawInstance:
    return InstanceGenerator(spec).generate()
