"""
Test configuration and fixtures.
"""

import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest
from loguru import logger

import orchestrator.experiment_loader as experiment_loader
import orchestrator.runner as runner
import relations.registry as registry
from model.prior import binary_prior, make_prior
from sampling.sampler import init_sampler
from shared.config import init_config
from shared.data_models import ModelParams, SamplingPlan

ENV_KEYS = (
    "IMMSE_LOG_LEVEL",
    "IMMSE_ENUM_BUDGET",
    "IMMSE_WORKERS",
    "IMMSE_Z_THRESHOLD",
    "IMMSE_BREAK_RELATION",
)


@pytest.fixture(autouse=True)
def fresh_lab(monkeypatch):
    """Fresh config, sampler, registry and runner for every test."""
    for key in ENV_KEYS:
        monkeypatch.delenv(key, raising=False)

    init_config()
    init_sampler(workers=2)
    registry._registry = None
    runner._runner = None
    experiment_loader._loader = None

    yield

    logger.remove()
    logger.add(sys.stderr, level="WARNING")


@pytest.fixture
def binary():
    """Symmetric ±1 prior."""
    return binary_prior()


@pytest.fixture
def zero_prior():
    """Deterministic zero signal."""
    return make_prior([[0.0]], [1.0])


@pytest.fixture
def ternary():
    """Asymmetric three-atom prior."""
    return make_prior([[-1.0], [0.0], [2.0]], [0.2, 0.5, 0.3])


@pytest.fixture
def small_params():
    """L = 4 interpolated model with a side channel."""
    return ModelParams(L=4, B=1, M=4, delta=1.0, t=0.5, h=0.1, sub_set_size=1)


@pytest.fixture
def small_plan():
    return SamplingPlan(n_samples=200, base_seed=1234, crn_tag="tests")


@pytest.fixture
def configs_dir(tmp_path):
    """Config directory with a lab.yaml and the real relation catalogue."""
    repo_configs = Path(__file__).parent.parent / "configs"
    configs = tmp_path / "configs"
    configs.mkdir()
    (configs / "relations.yaml").write_text((repo_configs / "relations.yaml").read_text())
    (configs / "lab.yaml").write_text(
        "lab:\n"
        "  log_level: DEBUG\n"
        "  enumeration_budget: 4096\n"
        "  z_threshold: 3.5\n"
        "analysis:\n"
        "  l_grid: [2, 3, 4]\n"
        "  t_grid_points: 5\n"
    )
    return configs
