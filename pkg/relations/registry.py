"""
Relation Registry - named catalogue of every check the runner can execute.

Metadata comes from configs/relations.yaml; each name is bound to a runner
that turns a CheckContext into reports.
"""

import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

import yaml
from loguru import logger
from pydantic import BaseModel, ConfigDict

from interpolation.path import default_t_grid
from shared.config import get_config
from shared.data_models import (
    ModelParams,
    PathSection,
    Prior,
    RelationMetadata,
    RelationReport,
    SamplingPlan,
    ScalingReport,
    ScalingSection,
    VerifySection,
)
from shared.validators import ValidationError

from .bounds import check_moment_bounds
from .immse import check_alpha_immse, check_canonical_immse, check_log_identity, check_side_channel_immse, check_snr_immse
from .lemmas import check_lemma_mmse_relation, check_mmse_variation, concentration_scan
from .nishimori import check_sub_measurement_ibp, nishimori_suite
from .path_checks import check_closed_form_scaling, check_dt_derivative, check_path_reconstruction

Report = Union[RelationReport, ScalingReport]


class CheckContext(BaseModel):
    """Everything a relation runner needs."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: ModelParams
    prior: Prior
    plan: SamplingPlan
    verify: VerifySection = VerifySection()
    scaling: ScalingSection = ScalingSection()
    path: PathSection = PathSection()

    @property
    def l_grid(self) -> List[int]:
        return list(self.scaling.l_grid or get_config().analysis.l_grid)

    @property
    def t_grid(self) -> List[float]:
        if self.path.t_grid is not None:
            return list(self.path.t_grid)
        return default_t_grid(self.path.t_points)


Runner = Callable[[CheckContext], List[Report]]
Applies = Callable[[CheckContext], bool]


def _dt_applies(ctx: CheckContext) -> bool:
    step = ctx.verify.t_fd_step or 0.0
    return ctx.params.S > 0 and ctx.params.t - step >= 0 and ctx.params.t + step <= 1


def _nishimori(ctx: CheckContext) -> List[Report]:
    with_noise = ctx.params.t > 0 and ctx.params.S > 0
    if not with_noise:
        logger.warning("Skipping the noise-weighted Nishimori identity (needs t > 0 and |S| >= 1)")
    return nishimori_suite(
        ctx.prior, ctx.params, ctx.plan, per_row=ctx.verify.per_row, include_noise_weighted=with_noise
    )


def _alpha(ctx: CheckContext) -> List[Report]:
    at_largest = ctx.params.at_size(ctx.l_grid[-1])
    return list(check_alpha_immse(ctx.prior, at_largest, ctx.plan, ctx.scaling.dM, ctx.l_grid))


def _log_identity(ctx: CheckContext) -> List[Report]:
    at_largest = ctx.params.at_size(ctx.l_grid[-1])
    return list(
        check_log_identity(ctx.prior, at_largest, ctx.plan, ctx.verify.fd_step, ctx.scaling.dM, ctx.l_grid)
    )


def _lemma(ctx: CheckContext) -> List[Report]:
    return [
        check_lemma_mmse_relation(ctx.prior, ctx.params.with_updates(t=t), ctx.l_grid, ctx.plan)
        for t in ctx.scaling.t_values
    ]


def _concentration(ctx: CheckContext) -> List[Report]:
    return [
        concentration_scan(
            ctx.prior, ctx.params, ctx.l_grid, ctx.scaling.h_window, ctx.plan, ctx.scaling.h_points
        )
    ]


def _default_runners() -> Dict[str, Runner]:
    return {
        "canonical_immse": lambda ctx: [
            check_canonical_immse(ctx.params, ctx.prior, ctx.plan, ctx.verify.fd_step)
        ],
        "nishimori": _nishimori,
        "dt_derivative": lambda ctx: check_dt_derivative(
            ctx.params, ctx.prior, ctx.plan, ctx.verify.t_fd_step
        ),
        "side_channel_immse": lambda ctx: [
            check_side_channel_immse(ctx.params, ctx.prior, ctx.plan, ctx.verify.fd_step)
        ],
        "sub_measurement_ibp": lambda ctx: [check_sub_measurement_ibp(ctx.params, ctx.prior, ctx.plan)],
        "moment_bounds": lambda ctx: check_moment_bounds(ctx.params, ctx.prior, ctx.plan),
        "snr_immse": lambda ctx: [check_snr_immse(ctx.prior, ctx.l_grid, ctx.params, ctx.plan)],
        "alpha_immse": _alpha,
        "log_identity": _log_identity,
        "lemma_mmse_relation": _lemma,
        "mmse_variation": lambda ctx: [check_mmse_variation(ctx.prior, ctx.params, ctx.l_grid, ctx.plan)],
        "concentration": _concentration,
        "closed_form_path": lambda ctx: [
            check_closed_form_scaling(ctx.prior, ctx.params, ctx.l_grid, ctx.plan, ctx.t_grid)
        ],
        "path_reconstruction": lambda ctx: [
            check_path_reconstruction(ctx.params, ctx.prior, ctx.plan, ctx.t_grid)
        ],
    }


def _default_applicability() -> Dict[str, Applies]:
    return {
        "canonical_immse": lambda ctx: ctx.params.M > 0,
        "nishimori": lambda ctx: ctx.params.n_rows > 0,
        "dt_derivative": _dt_applies,
        "side_channel_immse": lambda ctx: ctx.params.h > 0,
        "sub_measurement_ibp": lambda ctx: ctx.params.t > 0 and ctx.params.S > 0,
        "moment_bounds": lambda ctx: ctx.params.n_rows > 0,
    }


class RelationRegistry:
    """
    Central registry of named relation checks.

    Provides:
    - Registration and lookup by name
    - Lookup by task
    - Applicability filtering for default verify runs
    """

    def __init__(self):
        """Initialize an empty registry."""
        self._runners: Dict[str, Runner] = {}
        self._metadata: Dict[str, RelationMetadata] = {}
        self._applies: Dict[str, Applies] = {}
        logger.debug("RelationRegistry initialized")

    def register(self, metadata: RelationMetadata, runner: Runner, applies: Optional[Applies] = None) -> None:
        """
        Register a relation.

        Args:
            metadata: Catalogue entry
            runner: Callable producing the reports
            applies: Predicate deciding whether a default run includes it
        """
        if metadata.name in self._runners:
            logger.warning(f"Relation '{metadata.name}' already registered, replacing")

        self._runners[metadata.name] = runner
        self._metadata[metadata.name] = metadata
        if applies is not None:
            self._applies[metadata.name] = applies

        logger.debug(f"Registered relation '{metadata.name}' ({metadata.kind})")

    def get(self, name: str) -> Runner:
        """
        Get the runner of a relation.

        Raises:
            ValidationError: If the name is unknown
        """
        if name not in self._runners:
            raise ValidationError(
                f"Unknown relation '{name}'. Known relations: {', '.join(sorted(self._runners))}"
            )
        return self._runners[name]

    def get_metadata(self, name: str) -> Optional[RelationMetadata]:
        return self._metadata.get(name)

    def get_all_metadata(self) -> List[RelationMetadata]:
        return list(self._metadata.values())

    def find_by_task(self, task: str) -> List[str]:
        """Names of relations usable by a task, in catalogue order."""
        return [name for name, meta in self._metadata.items() if task in meta.tasks]

    def applicable(self, name: str, ctx: CheckContext) -> bool:
        predicate = self._applies.get(name)
        return predicate(ctx) if predicate is not None else True

    def run(self, name: str, ctx: CheckContext) -> List[Report]:
        logger.info(f"Running relation '{name}'")
        return self.get(name)(ctx)

    def get_relation_count(self) -> int:
        return len(self._runners)


def load_catalogue(path: Optional[Path] = None) -> List[RelationMetadata]:
    """Read relation metadata from YAML."""
    path = path or get_config().config_dir / "relations.yaml"
    if not path.exists():
        logger.warning(f"Relation catalogue not found at {path}")
        return []

    with open(path, "r") as f:
        document = yaml.safe_load(f) or {}
    return [RelationMetadata(**entry) for entry in document.get("relations", [])]


# Global registry instance
_registry: Optional[RelationRegistry] = None


def get_registry() -> RelationRegistry:
    """Get the global relation registry, loading the catalogue on first use."""
    global _registry
    if _registry is None:
        _registry = RelationRegistry()
        runners = _default_runners()
        applicability = _default_applicability()
        for metadata in load_catalogue():
            if metadata.name in runners:
                _registry.register(metadata, runners[metadata.name], applicability.get(metadata.name))
        logger.info(f"Relation registry loaded with {_registry.get_relation_count()} relations")
    return _registry
