"""
Quenched instance sampling.

Every random component is drawn from its own counter-based stream keyed by
(base_seed, crn_tag, instance index, component[, row]). Instance k of a plan is
therefore the same no matter which worker draws it or in what order, and models
that differ only in their number of rows share their common rows.
"""

import hashlib
import math
from typing import Union

import numpy as np

from shared.data_models import Instance, InstanceKey, ModelParams, Prior
from shared.validators import ValidationError

SIGNAL_STREAM = 0
SIDE_CHANNEL_STREAM = 1
ROW_STREAM = 2


def tag_hash(crn_tag: str) -> int:
    """Stable 64-bit integer for a CRN tag."""
    return int.from_bytes(hashlib.blake2b(crn_tag.encode("utf-8"), digest_size=8).digest(), "little")


def instance_rng(key: InstanceKey, *stream: int) -> np.random.Generator:
    """
    Philox generator for one component of one instance.

    Args:
        key: Instance key
        stream: Component identifiers appended to the spawn key

    Returns:
        A fresh numpy Generator
    """
    seed_seq = np.random.SeedSequence(
        entropy=key.base_seed,
        spawn_key=(tag_hash(key.crn_tag), key.index, *stream),
    )
    return np.random.Generator(np.random.Philox(seed_seq))


def sample_instance(
    params: ModelParams,
    prior: Prior,
    seed: Union[InstanceKey, int],
) -> Instance:
    """
    Draw one quenched instance (φ, s, z, ẑ).

    φ has M + |S| rows with iid N(0, 1/L) entries; the last |S| rows form the
    sub-extensive set. ẑ is drawn even at h = 0 so that CRN pairs across h align.

    Args:
        params: Model parameters
        prior: Section prior
        seed: Instance key, or a bare integer base seed

    Returns:
        Immutable Instance

    Raises:
        ValidationError: If the prior dimension does not match params.B
    """
    key = seed if isinstance(seed, InstanceKey) else InstanceKey(base_seed=int(seed))

    if prior.B != params.B:
        raise ValidationError(f"prior has B = {prior.B} but params.B = {params.B}")

    N = params.N
    n_rows = params.n_rows

    signal_rng = instance_rng(key, SIGNAL_STREAM)
    atom_index = signal_rng.choice(prior.K, size=params.L, p=prior.weights)
    s = np.ascontiguousarray(prior.atoms[atom_index].reshape(-1))

    zhat = instance_rng(key, SIDE_CHANNEL_STREAM).standard_normal(N)

    phi = np.empty((n_rows, N), dtype=np.float64)
    z = np.empty(n_rows, dtype=np.float64)
    scale = 1.0 / math.sqrt(params.L)
    for mu in range(n_rows):
        row_rng = instance_rng(key, ROW_STREAM, mu)
        phi[mu] = row_rng.standard_normal(N) * scale
        z[mu] = row_rng.standard_normal()

    for array in (phi, s, z, zhat):
        array.setflags(write=False)

    return Instance(
        phi=phi,
        s=s,
        z=z,
        zhat=zhat,
        M=params.M,
        L=params.L,
        prior=prior,
        key=key,
    )
