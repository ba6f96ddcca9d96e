"""
Interpolation package - the t-path between M and M + |S| measurements.
"""

from .derivative import dt_derivative
from .path import default_t_grid, integrate_path

__all__ = ["dt_derivative", "default_t_grid", "integrate_path"]
