"""
Experiment Loader - Loads experiment documents from YAML or JSON files.

Handles:
- Schema validation (unknown keys rejected at every level)
- CLI overrides (seed, workers, output directory)
- Prior construction from the document
"""

import sys
from pathlib import Path
from typing import Any, Dict, Optional, Union

sys.path.insert(0, str(Path(__file__).parent.parent))

import yaml
from loguru import logger
from pydantic import ValidationError as PydanticValidationError

from model.prior import make_prior
from shared.data_models import ExperimentConfig, Prior
from shared.validators import ValidationError


class ExperimentConfigError(ValidationError):
    """Raised when an experiment document is unreadable or violates the schema."""
    pass


class ExperimentLoader:
    """Loads and validates experiment documents."""

    def load(self, path: Union[str, Path]) -> ExperimentConfig:
        """
        Load an experiment document.

        YAML is a superset of JSON, so both formats are accepted.

        Args:
            path: Document path

        Returns:
            Validated ExperimentConfig

        Raises:
            ExperimentConfigError: If the file is missing, unparsable or invalid
        """
        path = Path(path)
        if not path.exists():
            raise ExperimentConfigError(f"Experiment file not found: {path}")

        try:
            with open(path, "r") as f:
                document = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ExperimentConfigError(f"Cannot parse {path}: {e}")

        if not isinstance(document, dict):
            raise ExperimentConfigError(f"{path} must contain a mapping at the top level")

        config = self.parse(document)
        logger.info(f"Loaded experiment '{config.name}' ({config.task}) from {path}")
        return config

    def parse(self, document: Dict[str, Any]) -> ExperimentConfig:
        """
        Validate an experiment mapping.

        Raises:
            ExperimentConfigError: On any schema violation
        """
        try:
            return ExperimentConfig(**document)
        except PydanticValidationError as e:
            raise ExperimentConfigError(f"Invalid experiment document: {e}")
        except TypeError as e:
            raise ExperimentConfigError(f"Invalid experiment document: {e}")

    def apply_overrides(
        self,
        config: ExperimentConfig,
        seed: Optional[int] = None,
        workers: Optional[int] = None,
        out: Optional[str] = None,
        task: Optional[str] = None,
    ) -> ExperimentConfig:
        """
        Apply command-line overrides and re-validate.

        Raises:
            ExperimentConfigError: If an override breaks the schema or the
                document's task differs from the requested one
        """
        if task is not None and config.task != task:
            raise ExperimentConfigError(
                f"Experiment '{config.name}' has task '{config.task}', not '{task}'"
            )

        document = config.model_dump(exclude_none=True)
        plan = document.setdefault("plan", {})
        if seed is not None:
            plan["base_seed"] = seed
        if workers is not None:
            plan["workers"] = workers
        if out is not None:
            document["output_dir"] = out
        return self.parse(document)

    def build_prior(self, config: ExperimentConfig) -> Prior:
        """
        Prior of an experiment.

        Raises:
            ExperimentConfigError: If the prior is invalid
        """
        try:
            prior = make_prior(config.prior.atoms, config.prior.weights)
        except ValidationError as e:
            raise ExperimentConfigError(f"Invalid prior: {e}")

        if prior.B != config.params.B:
            raise ExperimentConfigError(f"prior atoms have B = {prior.B} but params.B = {config.params.B}")
        return prior


# Global loader instance
_loader: Optional[ExperimentLoader] = None


def get_loader() -> ExperimentLoader:
    """Get the global experiment loader."""
    global _loader
    if _loader is None:
        _loader = ExperimentLoader()
    return _loader
