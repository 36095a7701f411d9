"""Console reports, JSON documents and Gantt charts."""

import json
import os
import string
from typing import Optional

from jinja2 import Template
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from src.errors import UnsupportedFormatError
from src.models import (
    BenchRow,
    Feasibility,
    GoodColoring,
    Instance,
    LoadProfile,
    Schedule,
    Topology,
    ValidationReport,
)
from src.schedule import occupancy, wrap

console = Console(stderr=True)

GANTT_FORMATS = ("text", "svg")
SYMBOLS = string.ascii_uppercase + string.ascii_lowercase + string.digits
PALETTE = [
    "#1f6feb",
    "#3fb950",
    "#d29922",
    "#f85149",
    "#a371f7",
    "#39c5cf",
    "#db61a2",
    "#8b949e",
]


def gantt_cells(
    schedule: Schedule, instance: Optional[Instance] = None
) -> tuple[list[str], list[str], dict[tuple[int, int], int]]:
    """Ports (rows), stream ids in legend order, and (row, slot) -> stream index.

    Explicit hops are used when present; otherwise occupancy is derived from
    the instance.
    """
    topology = Topology(switches=schedule.switches)
    ports = topology.ports(schedule.direction)
    row_of = {port: row for row, port in enumerate(ports)}
    stream_ids = list(dict.fromkeys(e.stream for e in schedule.entries))
    index_of = {sid: i for i, sid in enumerate(stream_ids)}
    streams = {s.id: s for s in instance.streams} if instance else {}

    cells = {}
    for e in schedule.entries:
        if e.hops:
            hops = [(row_of[h.port], h.slot) for h in e.hops]
        elif e.stream in streams:
            hops = [(link - 1, slot) for link, slot in occupancy(streams[e.stream], e.injection_time)]
        else:
            raise ValueError(f"no hops and no instance data for stream {e.stream}")
        for row, slot in hops:
            cells[(row, wrap(slot, schedule.hyperperiod))] = index_of[e.stream]
    return ports, stream_ids, cells


def render_gantt(
    schedule: Schedule, fmt: str = "text", instance: Optional[Instance] = None
) -> str:
    """Ports top to bottom, one column per slot of the hyperperiod."""
    if fmt not in GANTT_FORMATS:
        raise UnsupportedFormatError(fmt, GANTT_FORMATS)
    ports, stream_ids, cells = gantt_cells(schedule, instance)
    if fmt == "text":
        return _render_text(schedule, ports, stream_ids, cells)
    return _render_svg(schedule, ports, stream_ids, cells)


def _symbol(index: int) -> str:
    return SYMBOLS[index] if index < len(SYMBOLS) else "*"


def _render_text(schedule, ports, stream_ids, cells) -> str:
    hp = schedule.hyperperiod
    label_width = max((len(p) for p in ports), default=4) + 2
    col_width = len(str(hp)) + 1
    lines = [f"# gantt direction={schedule.direction.value} hyperperiod={hp}"]
    if stream_ids:
        legend = " ".join(f"{_symbol(i)}={sid}" for i, sid in enumerate(stream_ids))
        lines.append(f"# legend {legend}")
    header = "".join(str(slot).rjust(col_width) for slot in range(1, hp + 1))
    lines.append(" " * label_width + header)
    for row, port in enumerate(ports):
        marks = "".join(
            (_symbol(cells[(row, slot)]) if (row, slot) in cells else ".").rjust(col_width)
            for slot in range(1, hp + 1)
        )
        lines.append(port.ljust(label_width) + marks)
    return "\n".join(lines) + "\n"


def _render_svg(schedule, ports, stream_ids, cells) -> str:
    cell, label = 18, 64
    rects = [
        {
            "x": label + (slot - 1) * cell,
            "y": 24 + row * cell,
            "fill": PALETTE[index % len(PALETTE)],
            "title": f"{stream_ids[index]} @ {ports[row]} slot {slot}",
        }
        for (row, slot), index in sorted(cells.items())
    ]
    return Template(SVG_TEMPLATE).render(
        width=label + schedule.hyperperiod * cell + 8,
        height=24 + len(ports) * cell + 8,
        cell=cell,
        label=label,
        ports=ports,
        slots=range(1, schedule.hyperperiod + 1),
        rects=rects,
        direction=schedule.direction.value,
        hyperperiod=schedule.hyperperiod,
    )


class ReportGenerator:
    """Rich console output plus JSON/Gantt files."""

    def _path(self, path: str) -> str:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return path

    def print_feasibility(self, verdicts: list[Feasibility], profiles: list[LoadProfile]):
        table = Table(title="Feasibility", show_lines=True)
        table.add_column("Direction", style="cyan")
        table.add_column("Verdict", justify="center")
        table.add_column("Witness link", justify="center")
        table.add_column("Load / Capacity", justify="center")
        table.add_column("Peak load", justify="center")
        for verdict, profile in zip(verdicts, profiles):
            status = "[green]✓ feasible[/green]" if verdict.feasible else "[red]✗ infeasible[/red]"
            witness = "" if verdict.feasible else str(verdict.link)
            ratio = "" if verdict.feasible else f"{verdict.load} / {verdict.capacity}"
            table.add_row(
                verdict.direction.value,
                status,
                witness,
                ratio,
                str(max(profile.loads, default=0)),
            )
        console.print(table)

    def print_schedule_summary(self, schedules: list[Schedule], colorings: list[GoodColoring]):
        table = Table(title="Schedule", show_lines=True)
        table.add_column("Direction", style="cyan")
        table.add_column("Hyperperiod", justify="center")
        table.add_column("Replications", justify="center")
        table.add_column("Layers used", justify="center")
        for schedule, coloring in zip(schedules, colorings):
            table.add_row(
                schedule.direction.value,
                str(schedule.hyperperiod),
                str(len(schedule.entries)),
                str(coloring.layers_used()),
            )
        console.print(table)

    def print_validation(self, reports: list[ValidationReport], limit: int = 20):
        for report in reports:
            direction = report.direction.value if report.direction else "?"
            if report.passed:
                console.print(f"[green]✓ {direction}: pass[/green]")
                continue
            text = Text()
            text.append(f"{direction}: {len(report.violations)} violation(s)\n", style="bold red")
            for v in report.violations[:limit]:
                text.append(f"  [{v.kind.value}] {v.message}\n")
            if len(report.violations) > limit:
                text.append(f"  ... {len(report.violations) - limit} more\n", style="dim")
            console.print(Panel(text, title="Validation", border_style="red"))

    def print_bench(self, rows: list[BenchRow]):
        table = Table(title="Benchmark (median seconds)", show_lines=True)
        for column in ("Streams", "n", "decide", "find", "validate", "total", "Feasible"):
            table.add_column(column, justify="right")
        for row in rows:
            table.add_row(
                str(row.stream_count),
                str(row.switches),
                f"{row.decide_time:.4f}",
                f"{row.find_time:.4f}",
                f"{row.validate_time:.4f}",
                f"{row.total_time:.4f}",
                "yes" if row.feasible else "[red]no[/red]",
            )
        console.print(table)

    def save_json(self, document: dict, path: str) -> str:
        filepath = self._path(path)
        with open(filepath, "w") as f:
            json.dump(document, f, indent=2, sort_keys=False)
            f.write("\n")
        console.print(f"[green]JSON saved: {filepath}[/green]")
        return filepath

    def save_text(self, content: str, path: str) -> str:
        filepath = self._path(path)
        with open(filepath, "w") as f:
            f.write(content)
        console.print(f"[green]Saved: {filepath}[/green]")
        return filepath


SVG_TEMPLATE = """<?xml version="1.0" standalone="no"?>
<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
<title>gantt {{ direction }} hyperperiod {{ hyperperiod }}</title>
<rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="#0d1117"/>
{% for slot in slots %}<text x="{{ label + (slot - 1) * cell + cell // 2 }}" y="16" font-size="10" fill="#8b949e" text-anchor="middle">{{ slot }}</text>
{% endfor %}{% for port in ports %}<text x="4" y="{{ 24 + loop.index0 * cell + cell - 5 }}" font-size="11" fill="#c9d1d9">{{ port }}</text>
<line x1="{{ label }}" y1="{{ 24 + loop.index0 * cell }}" x2="{{ width - 8 }}" y2="{{ 24 + loop.index0 * cell }}" stroke="#30363d"/>
{% endfor %}{% for r in rects %}<rect x="{{ r.x }}" y="{{ r.y }}" width="{{ cell - 1 }}" height="{{ cell - 1 }}" fill="{{ r.fill }}"><title>{{ r.title }}</title></rect>
{% endfor %}</svg>
"""
