#!/usr/bin/env python3
"""
Enumeration Benchmark Script

Times exact enumeration of single instances and of a small plan.
Usage: python scripts/benchmark_enumeration.py [--L 16] [--M 8] [--samples 32]
"""
import sys
import time
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import click

from model.instance import sample_instance
from model.prior import binary_prior
from posterior.enumerate import enumerate_posterior
from sampling.sampler import QuenchedSampler
from shared.data_models import InstanceKey, ModelParams, SamplingPlan
from shared.utils import format_duration


def time_single(params: ModelParams, repeats: int) -> float:
    """Mean wall time of one enumeration, after a warm-up call that compiles the kernel."""
    prior = binary_prior()
    inst = sample_instance(params, prior, InstanceKey(base_seed=0, crn_tag="benchmark"))
    enumerate_posterior(inst, params)

    started = time.perf_counter()
    for _ in range(repeats):
        enumerate_posterior(inst, params)
    return (time.perf_counter() - started) / repeats


def time_plan(params: ModelParams, n_samples: int, workers: int) -> float:
    plan = SamplingPlan(n_samples=n_samples, base_seed=1, crn_tag="benchmark")
    sampler = QuenchedSampler(workers=workers, cache_size=1)

    started = time.perf_counter()
    sampler.run(params, binary_prior(), plan)
    return time.perf_counter() - started


@click.command()
@click.option("--L", "L", type=int, default=16, help="Number of sections")
@click.option("--M", "M", type=int, default=8, help="Number of measurement rows")
@click.option("--samples", type=int, default=32, help="Instances in the timed plan")
@click.option("--repeats", type=int, default=5, help="Repeats of the single-instance timing")
def main(L, M, samples, repeats):
    """Time exact enumeration at K = 2."""
    params = ModelParams(L=L, B=1, M=M, delta=1.0, t=0.5, h=0.01, sub_set_size=1)

    print("=" * 80)
    print(f"ENUMERATION BENCHMARK (K=2, L={params.L}, M={params.M}, |S|={params.S})")
    print("=" * 80)

    single = time_single(params, repeats)
    print(f"Single instance: {format_duration(single)} for {2 ** params.L} configurations")

    for workers in (1, 4):
        elapsed = time_plan(params, samples, workers)
        print(f"{samples} instances, {workers} worker(s): {format_duration(elapsed)}")

    print("=" * 80)


if __name__ == "__main__":
    main()
