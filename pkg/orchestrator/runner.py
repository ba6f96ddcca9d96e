"""
Experiment Runner - executes verify, sweep, scaling and path tasks.

Checks of one task run concurrently (asyncio.gather over worker threads);
outputs are ordered by (task, relation, grid index) regardless of completion
order.
"""

import asyncio
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

sys.path.insert(0, str(Path(__file__).parent.parent))

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from interpolation.path import integrate_path
from relations.path_checks import path_report
from relations.registry import CheckContext, RelationRegistry, get_registry
from sampling.quantities import QUANTITIES
from sampling.sampler import init_sampler
from shared.config import get_config
from shared.data_models import ExperimentConfig, ModelParams, Prior, RelationReport, SamplingPlan, ScalingReport
from shared.utils import format_duration
from shared.validators import ValidationError

from .experiment_loader import get_loader
from .results_store import estimate_row, relation_row, scaling_rows

Report = Union[RelationReport, ScalingReport]

VERSION = "0.1.0"


class RunResult(BaseModel):
    """Everything a run produced, ready to be written out."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: ExperimentConfig
    reports: List[Any] = Field(default_factory=list)
    rows: List[Dict[str, Any]] = Field(default_factory=list)
    digest: str = ""
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    def manifest(self) -> Dict[str, Any]:
        """Config echo, code version and instance digest."""
        return {
            "name": self.config.name,
            "version": VERSION,
            "config": self.config.model_dump(mode="json"),
            "instance_digest": self.digest,
            "n_reports": len(self.reports),
            "all_passed": self.passed,
        }


class ExperimentRunner:
    """
    Runs experiments.

    Manages:
    - Task dispatch
    - Concurrent relation checks
    - Row building in a fixed order
    """

    def __init__(self, registry: Optional[RelationRegistry] = None):
        self.registry = registry or get_registry()
        logger.info("ExperimentRunner initialized")

    async def run(self, config: ExperimentConfig) -> RunResult:
        """
        Execute an experiment.

        Args:
            config: Validated experiment

        Returns:
            RunResult

        Raises:
            ValidationError: On invalid parameters, budgets or relation names
        """
        started = time.perf_counter()
        workers = config.plan.workers or get_config().lab_config.workers
        sampler = init_sampler(workers=workers)

        prior = get_loader().build_prior(config)
        plan = config.plan.to_plan()
        logger.info(f"Running experiment '{config.name}' ({config.task}) with {workers} workers")

        handlers = {
            "verify": self._run_verify,
            "sweep": self._run_sweep,
            "scaling": self._run_scaling,
            "path": self._run_path,
        }
        reports, rows = await handlers[config.task](config, prior, plan)

        duration = time.perf_counter() - started
        logger.info(f"Experiment '{config.name}' finished in {format_duration(duration)}")
        return RunResult(
            config=config,
            reports=reports,
            rows=rows,
            digest=sampler.digest(),
            duration_seconds=duration,
        )

    async def _run_relations(self, names: List[str], ctx: CheckContext) -> List[Report]:
        for name in names:
            self.registry.get(name)

        batches = await asyncio.gather(
            *(asyncio.to_thread(self.registry.run, name, ctx) for name in names)
        )
        return [report for batch in batches for report in batch]

    def _verify_names(self, config: ExperimentConfig, ctx: CheckContext) -> List[str]:
        requested = config.verify.relations if config.verify else None
        if requested is not None:
            return list(requested)

        names = []
        for name in self.registry.find_by_task("verify"):
            if self.registry.applicable(name, ctx):
                names.append(name)
            else:
                logger.warning(f"Skipping '{name}': preconditions not met at these parameters")
        return names

    @staticmethod
    def _rows(task: str, reports: List[Report]) -> List[Dict[str, Any]]:
        rows: List[Dict[str, Any]] = []
        for report in reports:
            if isinstance(report, ScalingReport):
                rows.extend(scaling_rows(task, report))
            else:
                rows.append(relation_row(task, report))
        return rows

    async def _run_verify(self, config: ExperimentConfig, prior: Prior, plan: SamplingPlan):
        ctx = CheckContext(params=config.params, prior=prior, plan=plan, verify=config.verify)
        reports = await self._run_relations(self._verify_names(config, ctx), ctx)
        return reports, self._rows("verify", reports)

    async def _run_scaling(self, config: ExperimentConfig, prior: Prior, plan: SamplingPlan):
        ctx = CheckContext(params=config.params, prior=prior, plan=plan, scaling=config.scaling)
        reports = await self._run_relations(list(config.scaling.relations), ctx)
        return reports, self._rows("scaling", reports)

    @staticmethod
    def _sweep_params(params: ModelParams, parameter: str, value: float) -> ModelParams:
        if parameter == "L":
            return params.at_size(int(value))
        if parameter == "M":
            if value != int(value):
                raise ValidationError(f"M values must be integers, got {value}")
            return params.with_updates(M=int(value))
        return params.with_updates(**{parameter: float(value)})

    async def _run_sweep(self, config: ExperimentConfig, prior: Prior, plan: SamplingPlan):
        sweep = config.sweep
        for quantity in sweep.quantities:
            if quantity not in QUANTITIES:
                raise ValidationError(
                    f"Unknown quantity '{quantity}'. Known quantities: {', '.join(QUANTITIES)}"
                )

        reports: List[Report] = []
        rows: List[Dict[str, Any]] = []
        for value in sweep.values:
            params = self._sweep_params(config.params, sweep.parameter, value)
            estimates = await asyncio.gather(
                *(asyncio.to_thread(QUANTITIES[q], params, prior, plan) for q in sweep.quantities)
            )
            for quantity, est in zip(sweep.quantities, estimates):
                rows.append(estimate_row("sweep", quantity, params, est))

            if sweep.relations:
                ctx = CheckContext(params=params, prior=prior, plan=plan)
                point_reports = await self._run_relations(list(sweep.relations), ctx)
                reports.extend(point_reports)
                rows.extend(self._rows("sweep", point_reports))

        return reports, rows

    async def _run_path(self, config: ExperimentConfig, prior: Prior, plan: SamplingPlan):
        section = config.path
        h = section.h if section.h is not None else get_config().analysis.path_h
        params = config.params.with_updates(h=h)
        ctx = CheckContext(params=params, prior=prior, plan=plan, path=section)

        path = await asyncio.to_thread(integrate_path, params, prior, plan, ctx.t_grid)
        report = path_report(path, params, plan)

        rows = [
            estimate_row("path", "path_point", params.with_updates(t=point.t), point.i_est, point.dt_est)
            for point in path.points
        ]
        rows.append(relation_row("path", report))
        return [report], rows


# Global runner instance
_runner: Optional[ExperimentRunner] = None


def get_runner() -> ExperimentRunner:
    """Get the global experiment runner."""
    global _runner
    if _runner is None:
        _runner = ExperimentRunner()
    return _runner


def init_runner(registry: Optional[RelationRegistry] = None) -> ExperimentRunner:
    """Initialize the global experiment runner."""
    global _runner
    _runner = ExperimentRunner(registry=registry)
    return _runner
