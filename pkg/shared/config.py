"""
Configuration management for immse-lab.

Loads configuration from environment variables and config files.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field


DEFAULT_ENUMERATION_BUDGET = 2 ** 26


class LabConfig(BaseModel):
    """Runtime settings shared by every experiment."""

    log_level: str = Field(default="INFO")
    enumeration_budget: int = Field(default=DEFAULT_ENUMERATION_BUDGET, ge=1)
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    z_threshold: float = Field(default=4.0, gt=0)
    break_relation: Optional[str] = Field(default=None)


class AnalysisDefaults(BaseModel):
    """Defaults for grids and finite differences (configs/lab.yaml)."""

    l_grid: List[int] = Field(default_factory=lambda: [4, 8, 12, 16])
    h_grid_points: int = Field(default=5, ge=2)
    t_grid_points: int = Field(default=11, ge=2)
    fd_fraction: float = Field(default=0.02, gt=0)
    monotone_sigma: float = Field(default=2.0, gt=0)
    path_h: float = Field(default=0.01, ge=0)


class Config:
    """
    Central configuration manager for immse-lab.

    Loads configuration from:
    1. Environment variables (.env file)
    2. YAML configuration files
    3. Default values
    """

    def __init__(self, config_dir: Optional[Path] = None):
        """
        Initialize configuration.

        Args:
            config_dir: Directory containing config files. Defaults to ./configs
        """
        load_dotenv()

        self.config_dir = config_dir or Path(__file__).parent.parent / "configs"

        self.lab_yaml = self._load_yaml_config("lab.yaml")
        self.lab_config = self._load_lab_config()
        self.analysis = AnalysisDefaults(**self.lab_yaml.get("analysis", {}))

    def _load_lab_config(self) -> LabConfig:
        """Load lab settings: YAML values, overridden by the environment."""
        values: Dict[str, Any] = dict(self.lab_yaml.get("lab", {}))

        env_map = {
            "IMMSE_LOG_LEVEL": ("log_level", str),
            "IMMSE_ENUM_BUDGET": ("enumeration_budget", int),
            "IMMSE_WORKERS": ("workers", int),
            "IMMSE_Z_THRESHOLD": ("z_threshold", float),
            "IMMSE_BREAK_RELATION": ("break_relation", str),
        }
        for env_key, (field_name, cast) in env_map.items():
            raw = os.getenv(env_key)
            if raw is not None and raw != "":
                values[field_name] = cast(raw)

        return LabConfig(**values)

    def _load_yaml_config(self, filename: str) -> Dict[str, Any]:
        """Load a YAML configuration file."""
        config_path = self.config_dir / filename

        if not config_path.exists():
            return {}

        with open(config_path, "r") as f:
            return yaml.safe_load(f) or {}


# Global configuration instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config()
    return _config


def init_config(config_dir: Optional[Path] = None) -> Config:
    """Initialize the global configuration instance."""
    global _config
    _config = Config(config_dir)
    return _config
