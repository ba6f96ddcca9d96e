"""
Utility functions for immse-lab.
"""

import json
import math
from typing import Any, Dict

import numpy as np


def _jsonable(obj: Any) -> Any:
    """Convert numpy values and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(key): _jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(value) for value in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


def to_json(data: Dict[str, Any], pretty: bool = False) -> str:
    """
    Convert data to a JSON string with sorted keys.

    Args:
        data: Data to convert
        pretty: Whether to pretty-print

    Returns:
        JSON string
    """
    if pretty:
        return json.dumps(_jsonable(data), indent=2, sort_keys=True)
    return json.dumps(_jsonable(data), sort_keys=True)


def format_estimate(mean: float, std_error: float) -> str:
    """
    Format an estimate as "mean ± se".

    Args:
        mean: Estimate
        std_error: Standard error

    Returns:
        Formatted string (e.g., "0.1234 ± 0.0021")
    """
    if math.isnan(mean):
        return "-"
    if math.isinf(std_error):
        return f"{mean:.6g} ± inf"
    return f"{mean:.6g} ± {std_error:.2g}"


def format_duration(seconds: float) -> str:
    """
    Format a duration into a human-readable string.

    Returns:
        Formatted string (e.g., "2h 15m 30s", or "0.42s" under a minute)
    """
    if seconds < 60:
        return f"{seconds:.2f}s"

    hours = int(seconds // 3600)
    minutes = int((seconds % 3600) // 60)
    secs = int(seconds % 60)

    parts = []
    if hours > 0:
        parts.append(f"{hours}h")
    if minutes > 0:
        parts.append(f"{minutes}m")
    if secs > 0 or not parts:
        parts.append(f"{secs}s")

    return " ".join(parts)
