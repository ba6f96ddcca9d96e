"""
Model package - priors, quenched instances and Hamiltonians.

Everything here is a pure function of its inputs:
- Discrete section priors
- Counter-based sampling of quenched instances
- Base and interpolated-perturbed energies
"""

from .energy import base_energy, interp_energy
from .instance import instance_rng, sample_instance
from .prior import binary_prior, make_prior

__all__ = [
    "base_energy",
    "interp_energy",
    "instance_rng",
    "sample_instance",
    "binary_prior",
    "make_prior",
]
