#!/usr/bin/env python
"""
immse-lab CLI - run verification suites, sweeps, scaling tests and paths.

Usage:
    python cli.py verify  --config configs/experiments/verify_binary.yaml
    python cli.py sweep   --config configs/experiments/sweep_delta.yaml --out results/sweep
    python cli.py scaling --config configs/experiments/scaling_snr.yaml --workers 8
    python cli.py path    --config configs/experiments/path_binary.yaml --seed 7

    python cli.py relation list

Exit codes: 0 all checks pass, 2 some check fails, 1 configuration or
validation error.
"""

import asyncio
import sys
from pathlib import Path
from typing import Optional

sys.path.insert(0, str(Path(__file__).parent))

import click
from loguru import logger
from rich.console import Console
from rich.table import Table

from orchestrator.experiment_loader import get_loader
from orchestrator.results_store import ResultsStore
from orchestrator.runner import get_runner
from posterior.exceptions import NonFiniteEnergyError
from relations.registry import get_registry
from shared.config import get_config
from shared.utils import format_duration, format_estimate
from shared.validators import ValidationError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2

console = Console(stderr=True)


def setup_logging(level: Optional[str] = None) -> None:
    """Replace the default sink with one stderr sink at the configured level."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=(level or get_config().lab_config.log_level).upper(),
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {name}:{line} - {message}",
    )


def _write_error(out: Optional[str], name: str, error: Exception) -> None:
    if out is None:
        return
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.txt").write_text(f"{name}: {type(error).__name__}: {error}\n")


def run_task(task: str, config_path: str, out: Optional[str], workers: Optional[int], seed: Optional[int]) -> int:
    """
    Load, run and write one experiment.

    Returns:
        Exit code
    """
    loader = get_loader()
    name = Path(config_path).stem
    try:
        config = loader.load(config_path)
        config = loader.apply_overrides(config, seed=seed, workers=workers, out=out, task=task)
        name = config.name
        out = config.output_dir or str(Path("results") / config.name)
        result = asyncio.run(get_runner().run(config))
    except (ValidationError, NonFiniteEnergyError) as e:
        logger.opt(exception=e).error(f"{task} '{name}' aborted: {e}")
        console.print(f"[red]{type(e).__name__}: {e}[/red]")
        _write_error(out, name, e)
        return EXIT_ERROR

    paths = ResultsStore(Path(out)).write(result.rows, result.reports, result.manifest(), config.name)

    table = Table(title=f"{config.name} ({task})")
    table.add_column("Check", style="cyan")
    table.add_column("Value")
    table.add_column("Result")
    for report in result.reports:
        if hasattr(report, "lhs"):
            value = f"{format_estimate(report.lhs.mean, report.lhs.std_error)} vs {format_estimate(report.rhs.mean, report.rhs.std_error)}"
        else:
            value = f"slope {report.slope:.3g}" if report.slope is not None else "slope n/a"
        table.add_row(report.name, value, "[green]PASS[/green]" if report.passed else "[red]FAIL[/red]")
    console.print(table)
    console.print(f"Results in {paths['results'].parent} ({format_duration(result.duration_seconds)})")

    return EXIT_OK if result.passed else EXIT_FAILED


def _task_command(task: str, help_text: str):
    @click.option("--config", "config_path", required=True, type=click.Path(), help="Experiment document (YAML or JSON)")
    @click.option("--out", default=None, help="Output directory")
    @click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads")
    @click.option("--seed", type=click.IntRange(min=0, max=2 ** 64 - 1), default=None, help="Base seed (overrides config)")
    @click.pass_context
    def command(ctx, config_path, out, workers, seed):
        ctx.exit(run_task(task, config_path, out, workers, seed))

    command.__doc__ = help_text
    return cli.command(task)(command)


@click.group()
@click.option("--log-level", default=None, help="Log level (overrides IMMSE_LOG_LEVEL)")
def cli(log_level):
    """immse-lab - exact-enumeration checks of I-MMSE relations"""
    setup_logging(log_level)


_task_command("verify", "Run exact finite-L identity checks")
_task_command("sweep", "Sweep one parameter and estimate quantities")
_task_command("scaling", "Run L-scaling tests of asymptotic statements")
_task_command("path", "Reconstruct the interpolation path")


@cli.group()
def relation():
    """Inspect the relation catalogue"""
    pass


@relation.command("list")
def relation_list():
    """List all named relations"""
    registry = get_registry()

    table = Table(title="Relations")
    table.add_column("Name", style="cyan")
    table.add_column("Kind", style="yellow")
    table.add_column("Tasks", style="magenta")
    table.add_column("Statement", style="green")

    for meta in registry.get_all_metadata():
        table.add_row(meta.name, meta.kind, ", ".join(meta.tasks), meta.equation)

    Console().print(table)


if __name__ == "__main__":
    cli()
