"""
Tests for quenched instance sampling.
"""

import math

import numpy as np
import pytest

from model.instance import sample_instance
from model.prior import make_prior
from shared.data_models import InstanceKey, ModelParams
from shared.validators import ValidationError


def test_instance_shapes(binary):
    """φ has M + |S| rows and N columns."""
    params = ModelParams(L=4, B=1, M=4, delta=1.0, sub_set_size=1)
    inst = sample_instance(params, binary, 7)

    assert inst.phi.shape == (5, 4)
    assert inst.s.shape == (4,)
    assert inst.z.shape == (5,)
    assert inst.zhat.shape == (4,)
    assert inst.sub_size == 1
    assert set(np.unique(inst.s)) <= {-1.0, 1.0}


def test_row_variance_is_one_over_L(binary):
    """Entries of φ have variance 1/L (z-test over many draws)."""
    params = ModelParams(L=4, B=1, M=4, delta=1.0, sub_set_size=1)
    entries = np.concatenate(
        [sample_instance(params, binary, InstanceKey(base_seed=3, index=k)).phi.ravel() for k in range(400)]
    )

    variance = entries.var()
    # Standard error of the sample variance of Gaussian entries
    se = math.sqrt(2.0 / entries.size) * 0.25
    assert abs(variance - 0.25) < 5 * se


def test_same_key_gives_identical_instance(binary, small_params):
    """Same seed twice gives the identical instance."""
    key = InstanceKey(base_seed=99, crn_tag="a", index=3)
    first = sample_instance(small_params, binary, key)
    second = sample_instance(small_params, binary, key)

    assert first.digest() == second.digest()
    assert np.array_equal(first.phi, second.phi)


def test_different_tags_give_different_instances(binary, small_params):
    first = sample_instance(small_params, binary, InstanceKey(base_seed=1, crn_tag="a"))
    second = sample_instance(small_params, binary, InstanceKey(base_seed=1, crn_tag="b"))

    assert first.digest() != second.digest()


def test_rows_are_shared_across_row_counts(binary):
    """Models differing only in M share their common rows and the signal."""
    key = InstanceKey(base_seed=5, index=2)
    small = sample_instance(ModelParams(L=4, B=1, M=3, delta=1.0, sub_set_size=0), binary, key)
    large = sample_instance(ModelParams(L=4, B=1, M=4, delta=1.0, sub_set_size=0), binary, key)

    assert np.array_equal(small.s, large.s)
    assert np.array_equal(small.phi, large.phi[:3])
    assert np.array_equal(small.z, large.z[:3])


def test_deterministic_prior_repeats_its_atom():
    """A K = 1 prior gives s = (a, a, …, a)."""
    prior = make_prior([[0.5, -2.0]], [1.0])
    params = ModelParams(L=3, B=2, M=2, delta=1.0, sub_set_size=1)

    inst = sample_instance(params, prior, 0)

    assert inst.s.tolist() == [0.5, -2.0, 0.5, -2.0, 0.5, -2.0]


def test_instance_is_read_only(binary, small_params):
    inst = sample_instance(small_params, binary, 0)

    with pytest.raises(ValueError):
        inst.phi[0, 0] = 1.0


def test_dimension_mismatch_rejected(binary):
    params = ModelParams(L=2, B=2, M=2, delta=1.0)

    with pytest.raises(ValidationError):
        sample_instance(params, binary, 0)


def test_default_sub_set_size():
    """|S| = max(1, floor(M^u)) by default."""
    assert ModelParams(L=100, B=1, M=100, delta=1.0).S == 1
    assert ModelParams(L=4, B=1, M=0, delta=1.0).S == 1
    assert ModelParams(L=4, B=1, M=4, delta=1.0, sub_set_size=0).S == 0
