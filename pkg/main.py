"""
Daisy-Chain No-Wait Scheduler - Main Entry Point
================================================
Feasibility checks, optimal no-wait schedule synthesis and audits for
periodic time-triggered streams on a line of switches.

Exit codes: 0 ok/feasible, 1 usage or input error, 2 infeasible,
3 validation failure.
"""

import functools
import json
import logging
import os
import sys

import click
import yaml
from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from src import __version__
from src.bench import run_sweep, write_csv
from src.coloring import color
from src.errors import (
    GenerationError,
    InstanceError,
    PreconditionError,
    SchemaMismatchError,
    UnsupportedFormatError,
)
from src.feasibility import decide, load_profile
from src.generator import generate
from src.ingest import load_instance, normalize_instance
from src.models import (
    FORMAT_VERSION,
    GenSpec,
    IntervalModel,
    OracleOutcome,
    PeriodPolicy,
    Schedule,
)
from src.oracle import DEFAULT_NODE_BUDGET, brute_force
from src.report_generator import GANTT_FORMATS, ReportGenerator, render_gantt
from src.schedule import emit_gcl, load_schedules, schedule_document, synthesize
from src.validator import replay, validate

# Load environment variables
load_dotenv()

console = Console(stderr=True)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_INVALID = 3


def load_config(path: str = None) -> dict:
    """Load configuration from config.yaml (or DCSCHED_CONFIG)."""
    config_path = (
        path
        or os.environ.get("DCSCHED_CONFIG")
        or os.path.join(os.path.dirname(__file__), "config.yaml")
    )
    if os.path.exists(config_path):
        with open(config_path, "r") as f:
            return yaml.safe_load(f) or {}
    return {}


def parse_exponents(text: str) -> dict[int, float]:
    """'0:1,1:2,3:1' -> {0: 1.0, 1: 2.0, 3: 1.0}; a bare '4' means weight 1."""
    if isinstance(text, dict):
        text = ",".join(f"{k}:{w}" for k, w in text.items())
    weights = {}
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        k, _, w = part.partition(":")
        try:
            weights[int(k)] = float(w) if w else 1.0
        except ValueError:
            raise click.BadParameter(f"invalid exponent weights '{text}'")
    if not weights or any(k < 0 for k in weights):
        raise click.BadParameter(f"invalid exponent weights '{text}'")
    return weights


def handle_errors(func):
    """Map scheduler errors onto the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except json.JSONDecodeError as e:
            console.print(
                f"[red]❌ Malformed JSON at line {e.lineno}, column {e.colno}: {escape(e.msg)}[/red]"
            )
            sys.exit(EXIT_INPUT)
        except InstanceError as e:
            console.print(
                f"[red]❌ Invalid instance field '{escape(e.field)}': "
                f"{escape(e.message)}[/red]"
            )
            sys.exit(EXIT_INPUT)
        except (SchemaMismatchError, UnsupportedFormatError, GenerationError) as e:
            console.print(f"[red]❌ {escape(str(e))}[/red]")
            sys.exit(EXIT_INPUT)
        except click.BadParameter as e:
            console.print(f"[red]❌ {escape(e.format_message())}[/red]")
            sys.exit(EXIT_INPUT)
        except OSError as e:
            console.print(f"[red]❌ {escape(str(e))}[/red]")
            sys.exit(EXIT_INPUT)

    return wrapper


def _instances(ctx, path: str):
    raw = load_instance(path)
    return raw, normalize_instance(raw, ctx.obj["period_policy"])


@click.group()
@click.version_option(__version__)
@click.option("--config", "config_path", default=None, help="Path to config.yaml")
@click.option(
    "--period-policy",
    type=click.Choice([p.value for p in PeriodPolicy]),
    default=None,
    help="How to treat periods that are not powers of two",
)
@click.option(
    "--format-version",
    type=click.IntRange(FORMAT_VERSION, FORMAT_VERSION),
    default=FORMAT_VERSION,
    help="Output format version",
)
@click.option("--verbose", is_flag=True, help="Log progress")
@click.option("--trace", is_flag=True, help="Log recursion splits and capacities")
@click.pass_context
def cli(ctx, config_path, period_policy, format_version, verbose, trace):
    """Daisy-chain no-wait scheduler - check, schedule and audit TSN streams."""
    ctx.ensure_object(dict)
    config = load_config(config_path)

    level = logging.DEBUG if trace else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )

    scheduler = config.get("scheduler", {})
    policy = period_policy or scheduler.get("period_policy", "round_down")
    ctx.obj["config"] = config
    ctx.obj["period_policy"] = PeriodPolicy(policy)
    ctx.obj["format_version"] = format_version
    ctx.obj["report"] = ReportGenerator()


@cli.command()
@click.argument("instance_path", type=click.Path(dir_okay=False))
@click.option("--out", default=None, help="Write the verdict as JSON")
@click.pass_context
@handle_errors
def check(ctx, instance_path, out):
    """Decide whether a no-wait schedule exists.

    Example: python main.py check instance.json
    """
    _, instances = _instances(ctx, instance_path)
    verdicts = [decide(instance) for instance in instances]
    profiles = [load_profile(instance, instance.k_star) for instance in instances]
    report = ctx.obj["report"]
    report.print_feasibility(verdicts, profiles)

    feasible = all(v.feasible for v in verdicts)
    for v in verdicts:
        if not v.feasible:
            console.print(
                f"[red]witness: direction {v.direction.value}, link {v.link}, "
                f"load {v.load}, capacity {v.capacity}[/red]"
            )
    console.print(f"[bold]verdict: {'feasible' if feasible else 'infeasible'}[/bold]")
    if out:
        report.save_json(
            {
                "format_version": ctx.obj["format_version"],
                "verdict": "feasible" if feasible else "infeasible",
                "directions": [v.to_dict() for v in verdicts],
            },
            out,
        )
    sys.exit(EXIT_OK if feasible else EXIT_INFEASIBLE)


@cli.command()
@click.argument("instance_path", type=click.Path(dir_okay=False))
@click.option("--out", default=None, help="Schedule JSON (stdout when omitted)")
@click.option("--gantt", default=None, help="Gantt chart file ('-' for stdout)")
@click.option("--format", "gantt_format", type=click.Choice(GANTT_FORMATS), default=None)
@click.option("--gcl", default=None, help="Gate control list JSON")
@click.option("--emit-coloring", default=None, help="Layer of every replication as JSON")
@click.option("--parallel", is_flag=True, help="Color the two halves in parallel")
@click.option(
    "--method",
    type=click.Choice(["recursive", "greedy"]),
    default=None,
    help="greedy applies to equal-period instances only",
)
@click.pass_context
@handle_errors
def schedule(ctx, instance_path, out, gantt, gantt_format, gcl, emit_coloring, parallel, method):
    """Synthesize an optimal no-wait schedule.

    Example: python main.py schedule instance.json --out schedule.json --gantt -
    """
    config = ctx.obj["config"]
    scheduler = config.get("scheduler", {})
    parallel = parallel or scheduler.get("parallel", False)
    method = method or scheduler.get("method", "recursive")
    gantt_format = gantt_format or config.get("reporting", {}).get("gantt_format", "text")
    report = ctx.obj["report"]

    raw, instances = _instances(ctx, instance_path)
    verdicts = [decide(instance) for instance in instances]
    if not all(v.feasible for v in verdicts):
        for v in verdicts:
            if not v.feasible:
                console.print(
                    f"[red]✗ {v.direction.value} infeasible at link {v.link} "
                    f"(load {v.load} > capacity {v.capacity})[/red]"
                )
        sys.exit(EXIT_INFEASIBLE)

    try:
        colorings = [color(i, method=method, parallel=parallel) for i in instances]
    except PreconditionError as e:
        console.print(f"[red]❌ {escape(str(e))}[/red]")
        sys.exit(EXIT_INFEASIBLE)
    schedules = [synthesize(c, i) for c, i in zip(colorings, instances)]
    report.print_schedule_summary(schedules, colorings)

    extra = {"instance": raw.extra} if raw.extra else None
    document = schedule_document(
        schedules, list(instances), extra=extra, format_version=ctx.obj["format_version"]
    )
    if out:
        report.save_json(document, out)
    else:
        click.echo(json.dumps(document, indent=2))

    if gantt:
        charts = "".join(
            render_gantt(s, gantt_format, instance=i) for s, i in zip(schedules, instances)
        )
        if gantt == "-":
            click.echo(charts, nl=False)
        else:
            report.save_text(charts, gantt)

    if gcl:
        queues = config.get("gcl", {}).get("queues", 8)
        table = emit_gcl(schedules[0], queues).merge(emit_gcl(schedules[1], queues))
        report.save_json(table.to_dict(), gcl)

    if emit_coloring:
        layers = {}
        for c in colorings:
            layers.update(c.to_dict())
        report.save_json(
            {
                "format_version": ctx.obj["format_version"],
                "hyperperiods": {
                    i.direction.value: c.hyperperiod for c, i in zip(colorings, instances)
                },
                "layers": layers,
            },
            emit_coloring,
        )
    sys.exit(EXIT_OK)


@cli.command(name="validate")
@click.argument("instance_path", type=click.Path(dir_okay=False))
@click.argument("schedule_path", type=click.Path(dir_okay=False))
@click.option("--out", default=None, help="Write the validation report as JSON")
@click.option("--replay", "use_replay", is_flag=True, help="Cross-check with the slot simulator")
@click.pass_context
@handle_errors
def validate_cmd(ctx, instance_path, schedule_path, out, use_replay):
    """Audit a schedule against an instance.

    Example: python main.py validate instance.json schedule.json
    """
    _, instances = _instances(ctx, instance_path)
    schedules = load_schedules(schedule_path)
    reports = []
    for instance in instances:
        sched = schedules.get(instance.direction) or Schedule(
            hyperperiod=instance.hyperperiod,
            direction=instance.direction,
            switches=instance.topology.switches,
        )
        result = validate(sched, instance)
        if use_replay:
            conflicts = replay(sched, instance)
            console.print(
                f"[dim]replay {instance.direction.value}: {len(conflicts)} conflict(s)[/dim]"
            )
        reports.append(result)

    report_gen = ctx.obj["report"]
    report_gen.print_validation(reports)
    passed = all(r.passed for r in reports)
    if out:
        report_gen.save_json(
            {
                "format_version": ctx.obj["format_version"],
                "verdict": "pass" if passed else "fail",
                "reports": [r.to_dict() for r in reports],
            },
            out,
        )
    console.print(f"[bold]verdict: {'pass' if passed else 'fail'}[/bold]")
    sys.exit(EXIT_OK if passed else EXIT_INVALID)


@cli.command()
@click.argument("instance_path", type=click.Path(dir_okay=False))
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Search node budget")
@click.option("--out", default=None, help="Write outcomes as JSON")
@click.pass_context
@handle_errors
def oracle(ctx, instance_path, budget, out):
    """Exhaustive search (exponential time; for tests and debugging).

    Example: python main.py oracle small.json --budget 100000
    """
    budget = budget or ctx.obj["config"].get("oracle", {}).get(
        "node_budget", DEFAULT_NODE_BUDGET
    )
    _, instances = _instances(ctx, instance_path)
    results = {i.direction: brute_force(i, budget) for i in instances}
    for direction, result in results.items():
        console.print(
            f"{direction.value}: {result.outcome.value} "
            f"({result.nodes_explored} nodes)"
        )
    if out:
        ctx.obj["report"].save_json(
            {
                "format_version": ctx.obj["format_version"],
                "results": {d.value: r.to_dict() for d, r in results.items()},
            },
            out,
        )

    outcomes = {r.outcome for r in results.values()}
    if OracleOutcome.BUDGET_EXCEEDED in outcomes:
        console.print("[yellow]⚠ budget exceeded; no verdict[/yellow]")
        sys.exit(EXIT_INPUT)
    if OracleOutcome.EXHAUSTED_INFEASIBLE in outcomes:
        sys.exit(EXIT_INFEASIBLE)
    sys.exit(EXIT_OK)


@cli.command()
@click.option("--switches", "-n", type=click.IntRange(min=2), default=None)
@click.option("--streams", "stream_count", type=click.IntRange(min=0), default=None)
@click.option("--exponents", default=None, help="Weighted period exponents, e.g. '0:1,1:1,2:2'")
@click.option(
    "--model",
    type=click.Choice([m.value for m in IntervalModel]),
    default=None,
    help="Endpoint distribution",
)
@click.option("--seed", type=int, default=None)
@click.option("--feasible-only", is_flag=True)
@click.option("--max-attempts", type=click.IntRange(min=1), default=None)
@click.option("--out", default=None, help="Instance JSON (stdout when omitted)")
@click.pass_context
@handle_errors
def gen(ctx, switches, stream_count, exponents, model, seed, feasible_only, max_attempts, out):
    """Generate a random instance.

    Example: python main.py gen -n 32 --streams 500 --model hub-biased --seed 42
    """
    defaults = ctx.obj["config"].get("generator", {})
    spec = GenSpec(
        switches=switches or defaults.get("switches", 8),
        stream_count=stream_count if stream_count is not None else defaults.get("streams", 16),
        period_exponents=parse_exponents(exponents or defaults.get("period_exponents", "0:1,1:1,2:1")),
        interval_model=IntervalModel(model or defaults.get("interval_model", "uniform")),
        seed=seed if seed is not None else defaults.get("seed", 0),
        feasible_only=feasible_only or defaults.get("feasible_only", False),
        max_attempts=max_attempts or defaults.get("max_attempts", 1000),
    )
    document = generate(spec).to_dict()
    if out:
        ctx.obj["report"].save_json(document, out)
    else:
        click.echo(json.dumps(document, indent=2))


def _sweep_sizes(max_streams: int) -> list[int]:
    sizes, size = [], 1000
    while size < max_streams:
        sizes.append(size)
        size *= 2
    sizes.append(max_streams)
    return sizes


@cli.command()
@click.option("--max-streams", type=click.IntRange(min=1), default=None)
@click.option("--sizes", default=None, help="Comma-separated stream counts")
@click.option("--switches", "-n", type=click.IntRange(min=2), default=None)
@click.option("--repeats", type=click.IntRange(min=1), default=None)
@click.option("--max-exponent", type=click.IntRange(min=0), default=None)
@click.option(
    "--profile",
    type=click.Choice([m.value for m in IntervalModel]),
    default=None,
)
@click.option("--feasible-only", is_flag=True)
@click.option("--seed", type=int, default=None)
@click.option("--parallel", is_flag=True, help="Color the two halves in parallel")
@click.option("--csv", "csv_path", default=None, help="Write results as CSV")
@click.pass_context
@handle_errors
def bench(ctx, max_streams, sizes, switches, repeats, max_exponent, profile, feasible_only, seed, parallel, csv_path):
    """Time decide, find and validate over growing stream counts.

    Example: python main.py bench --sizes 1000,2000,4000 --csv bench.csv
    """
    defaults = ctx.obj["config"].get("bench", {})
    max_exponent = max_exponent if max_exponent is not None else defaults.get("max_exponent", 10)
    base = GenSpec(
        switches=switches or defaults.get("switches", 32),
        stream_count=0,
        period_exponents={k: 1.0 for k in range(max_exponent + 1)},
        interval_model=IntervalModel(profile or defaults.get("profile", "hub-biased")),
        seed=seed if seed is not None else defaults.get("seed", 0),
        feasible_only=feasible_only or defaults.get("feasible_only", False),
        max_attempts=defaults.get("max_attempts", 1000),
    )
    if sizes:
        try:
            points = [int(s) for s in sizes.split(",") if s.strip()]
        except ValueError:
            raise click.BadParameter(f"invalid sizes '{sizes}'", param_hint="--sizes")
    else:
        points = _sweep_sizes(max_streams or defaults.get("max_streams", 4000))

    console.print(
        f"[cyan]Benchmarking {points} streams on {base.switches} switches "
        f"({base.interval_model.value}, periods up to 2^{max_exponent})...[/cyan]"
    )
    rows = run_sweep(base, points, repeats=repeats or defaults.get("repeats", 3), parallel=parallel)
    ctx.obj["report"].print_bench(rows)
    if csv_path:
        write_csv(rows, csv_path)
        console.print(f"[green]CSV saved: {csv_path}[/green]")


# ─────────────────────────────────────────────
# Entry point
# ─────────────────────────────────────────────
if __name__ == "__main__":
    cli()
