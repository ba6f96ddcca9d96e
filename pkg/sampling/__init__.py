"""
Quenched Monte Carlo package.

Components:
- Counter-seeded sampler with a worker pool and sample-set cache
- Per-instance observables
- Deterministic statistics
- Macroscopic quantities (mutual information, MMSEs, overlap)
"""

from .quantities import (
    QUANTITIES,
    measurement_mmse,
    mmse,
    mutual_info,
    overlap_stats,
    sub_measurement_mmse,
)
from .sampler import QuenchedSampler, SampleSet, get_sampler, init_sampler
from .statistics import estimate, tree_sum

__all__ = [
    "QUANTITIES",
    "measurement_mmse",
    "mmse",
    "mutual_info",
    "overlap_stats",
    "sub_measurement_mmse",
    "QuenchedSampler",
    "SampleSet",
    "get_sampler",
    "init_sampler",
    "estimate",
    "tree_sum",
]
