"""
Quenched sampler - draws the instances of a plan and enumerates each one.

Instance k of a plan is keyed (base_seed, crn_tag, k). Work is spread over a
thread pool (the enumeration kernel releases the GIL) and results are stored
by index, so the sample set is independent of the worker count.
"""

import hashlib
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from model.instance import sample_instance
from posterior.enumerate import enumerate_posterior
from shared.config import get_config
from shared.data_models import (
    EstimateWithError,
    Instance,
    InstanceKey,
    ModelParams,
    PosteriorSummary,
    Prior,
    SamplingPlan,
)

from .statistics import estimate

Observable = Callable[[Instance, Optional[PosteriorSummary], ModelParams], float]


class SampleSet:
    """Instances of one plan with their posterior summaries, in index order."""

    def __init__(
        self,
        params: ModelParams,
        prior: Prior,
        plan: SamplingPlan,
        instances: List[Instance],
        summaries: Optional[List[PosteriorSummary]] = None,
    ):
        self.params = params
        self.prior = prior
        self.plan = plan
        self.instances = instances
        self.summaries = summaries

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def digest(self) -> str:
        """Combined digest of all instance draws, in index order."""
        combined = hashlib.blake2b(digest_size=16)
        for inst in self.instances:
            combined.update(inst.digest().encode("ascii"))
        return combined.hexdigest()

    def values(self, observable: Observable) -> np.ndarray:
        """Per-instance values of an observable."""
        if self.summaries is None:
            return np.array(
                [observable(inst, None, self.params) for inst in self.instances], dtype=np.float64
            )
        return np.array(
            [
                observable(inst, post, self.params)
                for inst, post in zip(self.instances, self.summaries)
            ],
            dtype=np.float64,
        )

    def estimate(self, observable: Observable) -> EstimateWithError:
        return estimate(self.values(observable), self.plan)


class QuenchedSampler:
    """
    Runs sampling plans with a fixed-size worker pool and an LRU cache.

    The cache key is (params, prior fingerprint, plan), so estimators sharing a
    plan reuse the same enumerated instances.
    """

    def __init__(self, workers: Optional[int] = None, cache_size: int = 64):
        """
        Initialize the sampler.

        Args:
            workers: Worker threads; defaults to the configured count
            cache_size: Number of sample sets kept in memory
        """
        self.workers = workers or get_config().lab_config.workers
        self.cache_size = cache_size
        self._cache: "OrderedDict[Tuple, SampleSet]" = OrderedDict()
        self._digests: Dict[str, str] = {}
        self._lock = threading.Lock()
        logger.info(f"QuenchedSampler initialized with {self.workers} workers")

    def _cache_key(self, params: ModelParams, prior: Prior, plan: SamplingPlan, enumerate_: bool) -> Tuple:
        return (params, prior.fingerprint, plan, enumerate_)

    def _lookup(self, key: Tuple) -> Optional[SampleSet]:
        with self._lock:
            found = self._cache.get(key)
            if found is not None:
                self._cache.move_to_end(key)
            return found

    def _store(self, key: Tuple, sample_set: SampleSet) -> None:
        with self._lock:
            self._cache[key] = sample_set
            self._cache.move_to_end(key)
            while len(self._cache) > self.cache_size:
                self._cache.popitem(last=False)

            label = f"{sample_set.params.model_dump_json()}|{sample_set.prior.fingerprint}|{sample_set.plan.model_dump_json()}"
            self._digests[label] = sample_set.digest

    def _one(self, params: ModelParams, prior: Prior, plan: SamplingPlan, index: int, enumerate_: bool):
        key = InstanceKey(base_seed=plan.base_seed, crn_tag=plan.crn_tag, index=index)
        inst = sample_instance(params, prior, key)
        logger.debug(f"instance {plan.crn_tag}/{plan.base_seed}/{index} digest {inst.digest()}")
        summary = enumerate_posterior(inst, params) if enumerate_ else None
        return inst, summary

    def run(
        self,
        params: ModelParams,
        prior: Prior,
        plan: SamplingPlan,
        enumerate_: bool = True,
    ) -> SampleSet:
        """
        Draw (and enumerate) every instance of a plan.

        Args:
            params: Model parameters
            prior: Section prior
            plan: Sampling plan
            enumerate_: Whether to compute posterior summaries

        Returns:
            SampleSet in index order

        Raises:
            EnumerationBudgetError: If K^L exceeds the budget
            NonFiniteEnergyError: If an energy is not finite
        """
        key = self._cache_key(params, prior, plan, enumerate_)
        cached = self._lookup(key)
        if cached is not None:
            return cached

        logger.info(
            f"Sampling {plan.n_samples} instances (L={params.L}, M={params.M}, |S|={params.S}, "
            f"delta={params.delta}, t={params.t}, h={params.h}, tag={plan.crn_tag})"
        )

        results: List = [None] * plan.n_samples
        if self.workers == 1 or plan.n_samples == 1:
            for index in range(plan.n_samples):
                results[index] = self._one(params, prior, plan, index, enumerate_)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                futures = {
                    pool.submit(self._one, params, prior, plan, index, enumerate_): index
                    for index in range(plan.n_samples)
                }
                for future, index in futures.items():
                    results[index] = future.result()

        instances = [inst for inst, _ in results]
        summaries = [post for _, post in results] if enumerate_ else None
        sample_set = SampleSet(params, prior, plan, instances, summaries)
        self._store(key, sample_set)
        return sample_set

    def draw(self, params: ModelParams, prior: Prior, plan: SamplingPlan) -> SampleSet:
        """Instances of a plan without enumeration."""
        return self.run(params, prior, plan, enumerate_=False)

    def digest(self) -> str:
        """Digest over every sample set drawn so far, independent of draw order."""
        with self._lock:
            entries = sorted(self._digests.items())
        combined = hashlib.blake2b(digest_size=16)
        for label, value in entries:
            combined.update(label.encode("utf-8"))
            combined.update(value.encode("ascii"))
        return combined.hexdigest()

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()
            self._digests.clear()


# Global sampler instance
_sampler: Optional[QuenchedSampler] = None


def get_sampler() -> QuenchedSampler:
    """Get the global sampler instance."""
    global _sampler
    if _sampler is None:
        _sampler = QuenchedSampler()
    return _sampler


def init_sampler(workers: Optional[int] = None, cache_size: int = 64) -> QuenchedSampler:
    """Initialize the global sampler instance."""
    global _sampler
    _sampler = QuenchedSampler(workers=workers, cache_size=cache_size)
    return _sampler
