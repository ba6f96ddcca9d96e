"""
Orchestrator package - experiment loading, execution and output.

This package contains:
- Experiment document loading and validation
- The async experiment runner
- The results store (CSV, text report, manifest)
"""

from .experiment_loader import ExperimentConfigError, ExperimentLoader, get_loader
from .results_store import ResultsStore
from .runner import ExperimentRunner, RunResult, get_runner, init_runner

__all__ = [
    "ExperimentConfigError",
    "ExperimentLoader",
    "get_loader",
    "ResultsStore",
    "ExperimentRunner",
    "RunResult",
    "get_runner",
    "init_runner",
]
