"""
Data models for immse-lab.

Defines the value types shared by the model, the enumeration kernel, the quenched
sampler, the relation checks and the experiment runner.
"""

import hashlib
import math
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from shared.validators import ValidationError


class Prior(BaseModel):
    """
    Discrete section prior: K atoms in B dimensions with probability weights.

    Built through model.prior.make_prior, which validates and normalizes.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    atoms: np.ndarray  # K×B
    weights: np.ndarray  # K
    s_max: float

    @property
    def K(self) -> int:
        return int(self.atoms.shape[0])

    @property
    def B(self) -> int:
        return int(self.atoms.shape[1])

    @property
    def support(self) -> np.ndarray:
        """Indices of atoms with positive weight."""
        return np.flatnonzero(self.weights > 0)

    @property
    def mean_section(self) -> np.ndarray:
        return self.weights @ self.atoms

    @property
    def section_variance(self) -> float:
        """Prior variance per section, Σ_k p_k ||a_k - E a||²."""
        centered = self.atoms - self.mean_section
        return float(self.weights @ np.sum(centered ** 2, axis=1))

    @property
    def fingerprint(self) -> str:
        digest = hashlib.blake2b(digest_size=16)
        digest.update(np.ascontiguousarray(self.atoms, dtype=np.float64).tobytes())
        digest.update(np.ascontiguousarray(self.weights, dtype=np.float64).tobytes())
        return digest.hexdigest()

    def describe(self) -> Dict[str, Any]:
        return {"atoms": self.atoms.tolist(), "weights": self.weights.tolist()}


class ModelParams(BaseModel):
    """
    Scalar parameters of the interpolated, perturbed RLE model.

    The rows of the sub-extensive set S are the last |S| rows of an instance.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    L: int = Field(ge=1)
    B: int = Field(ge=1)
    M: int = Field(ge=0)
    delta: float = Field(gt=0, allow_inf_nan=False)
    t: float = Field(default=0.0, ge=0, le=1)
    h: float = Field(default=0.0, ge=0, allow_inf_nan=False)
    u: float = Field(default=0.04, gt=0, lt=1)
    sub_set_size: Optional[int] = Field(default=None, ge=0)

    @property
    def N(self) -> int:
        return self.L * self.B

    @property
    def alpha(self) -> float:
        return self.M / self.N

    @property
    def S(self) -> int:
        """Realized size of the sub-extensive set."""
        if self.sub_set_size is not None:
            return self.sub_set_size
        return max(1, math.floor(self.M ** self.u + 1e-12))

    @property
    def n_rows(self) -> int:
        return self.M + self.S

    @property
    def snr(self) -> float:
        return 1.0 / self.delta

    def with_updates(self, **changes: Any) -> "ModelParams":
        """
        Copy with changes, re-running validation.

        Raises:
            ValidationError: If a changed value is out of range
        """
        try:
            return ModelParams(**{**self.model_dump(), **changes})
        except PydanticValidationError as e:
            raise ValidationError(f"Invalid model parameters {changes}: {e}")

    def base_model(self) -> "ModelParams":
        """Restriction to the M base rows without side channel."""
        return self.with_updates(t=0.0, h=0.0, sub_set_size=0)

    def at_size(self, L: int) -> "ModelParams":
        """Same template at section count L, keeping the measurement rate fixed."""
        M = int(round(self.M * L / self.L))
        return self.with_updates(L=L, M=M)


class InstanceKey(BaseModel):
    """Counter-based generator key of one quenched draw."""

    model_config = ConfigDict(frozen=True)

    base_seed: int = Field(ge=0, lt=2 ** 64)
    crn_tag: str = "default"
    index: int = Field(default=0, ge=0)


class Instance(BaseModel):
    """One quenched draw (φ, s, z, ẑ) of the model."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    phi: np.ndarray  # (M+|S|)×N
    s: np.ndarray  # N
    z: np.ndarray  # M+|S|
    zhat: np.ndarray  # N
    M: int
    L: int
    prior: Prior
    key: InstanceKey

    @property
    def N(self) -> int:
        return int(self.phi.shape[1])

    @property
    def s_max(self) -> float:
        return self.prior.s_max

    @property
    def B(self) -> int:
        return self.N // self.L

    @property
    def n_rows(self) -> int:
        return int(self.phi.shape[0])

    @property
    def sub_size(self) -> int:
        return self.n_rows - self.M

    def measurements(self, delta: float) -> np.ndarray:
        """y_μ = [φs]_μ + z_μ√Δ for the base rows."""
        return self.phi[: self.M] @ self.s + self.z[: self.M] * math.sqrt(delta)

    def digest(self) -> str:
        digest = hashlib.blake2b(digest_size=16)
        for array in (self.phi, self.s, self.z, self.zhat):
            digest.update(np.ascontiguousarray(array).tobytes())
        return digest.hexdigest()


class PosteriorSummary(BaseModel):
    """
    Exact Gibbs quantities of one instance.

    Only single-replica moments are stored; replica-pair averages factorize.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    log_z: float
    mean: np.ndarray  # ⟨X⟩, N
    second_moment: np.ndarray  # ⟨X²⟩, N
    overlap_mean: float  # ⟨ℰ⟩
    overlap_sq: float  # ⟨ℰ²⟩
    row_mean: np.ndarray  # ⟨[φX̄]_μ⟩, M+|S|
    row_sq: np.ndarray  # ⟨[φX̄]_μ²⟩, M+|S|
    section_mmse_term: float  # ||s - ⟨X⟩||²/L
    marginals: np.ndarray  # L×K, P(x_l = a_k)
    sub_row_section: np.ndarray  # |S|×L×K, ⟨[φX̄]_ν 1{x_l = a_k}⟩
    sub_overlap_row_sq: np.ndarray  # |S|, ⟨ℰ [φX̄]_ν²⟩
    n_configurations: int


class SamplingPlan(BaseModel):
    """How many quenched instances to draw and under which key."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_samples: int = Field(ge=1)
    base_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    crn_tag: str = "default"

    def with_seed(self, base_seed: Optional[int]) -> "SamplingPlan":
        if base_seed is None:
            return self
        return SamplingPlan(n_samples=self.n_samples, base_seed=base_seed, crn_tag=self.crn_tag)


class EstimateWithError(BaseModel):
    """Monte Carlo mean with its standard error."""

    model_config = ConfigDict(frozen=True)

    mean: float
    std_error: float = Field(ge=0)
    n_samples: int = Field(ge=1)
    base_seed: Optional[int] = None
    crn_tag: Optional[str] = None


class PathPoint(BaseModel):
    """Quenched estimates at one point of the t-path."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(ge=0, le=1)
    i_est: EstimateWithError
    e_est: EstimateWithError
    y_sub_est: EstimateWithError
    dt_est: EstimateWithError


class DtDerivative(BaseModel):
    """t-derivative of i_{t,h} estimated three ways on one plan."""

    model_config = ConfigDict(frozen=True)

    t: float
    direct: Optional[EstimateWithError] = None  # Gibbs form, t > 0 only
    ibp: EstimateWithError  # integrated-by-parts form
    finite_difference: Optional[EstimateWithError] = None
    fd_bias: float = 0.0
    fd_step: Optional[float] = None

    @property
    def difference(self) -> Optional[EstimateWithError]:
        """direct − ibp with the conservative combined error."""
        if self.direct is None:
            return None
        return EstimateWithError(
            mean=self.direct.mean - self.ibp.mean,
            std_error=math.hypot(self.direct.std_error, self.ibp.std_error),
            n_samples=min(self.direct.n_samples, self.ibp.n_samples),
            base_seed=self.ibp.base_seed,
            crn_tag=self.ibp.crn_tag,
        )


class PathReconstruction(BaseModel):
    """i_{1,h} − i_{0,h} rebuilt along the t-path."""

    model_config = ConfigDict(frozen=True)

    points: List[PathPoint]
    quadrature: EstimateWithError
    quadrature_bias: Optional[float] = None
    closed_form: EstimateWithError
    direct: EstimateWithError
    notes: List[str] = Field(default_factory=list)


class RelationReport(BaseModel):
    """Verdict of one identity check."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    lhs: EstimateWithError
    rhs: EstimateWithError
    residual: float
    combined_error: float
    z_score: float
    passed: bool = Field(alias="pass")
    threshold: float
    kind: Literal["equality", "upper_bound"] = "equality"
    fd_bias: float = 0.0
    params: Optional[ModelParams] = None
    plan: Optional[SamplingPlan] = None
    notes: List[str] = Field(default_factory=list)
    diagnostics: Dict[str, float] = Field(default_factory=dict)


class ScalingPoint(BaseModel):
    """Residual of an asymptotic statement at one L."""

    model_config = ConfigDict(frozen=True)

    L: int
    M: int
    sub_set_size: int
    residual: EstimateWithError
    diagnostics: Dict[str, float] = Field(default_factory=dict)


class ScalingReport(BaseModel):
    """Residual-vs-L series of an o_L(1) statement with its decay test."""

    model_config = ConfigDict(frozen=True)

    name: str
    l_grid: List[int]
    points: List[ScalingPoint]
    slope: Optional[float] = None
    slope_ci: Optional[Tuple[float, float]] = None
    monotone: bool
    halved: Optional[bool] = None
    passed: bool
    params: Optional[ModelParams] = None
    plan: Optional[SamplingPlan] = None
    notes: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_grid(self) -> "ScalingReport":
        if len(self.l_grid) < 3 or any(b <= a for a, b in zip(self.l_grid, self.l_grid[1:])):
            raise ValueError(f"L grid must be strictly increasing with >= 3 points: {self.l_grid}")
        return self


class RelationMetadata(BaseModel):
    """Describes a named relation check."""

    name: str
    description: str
    kind: Literal["exact", "scaling", "bound"]
    equation: str
    tasks: List[str] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Experiment documents
# ---------------------------------------------------------------------------


class PriorSpec(BaseModel):
    """Prior as written in an experiment document."""

    model_config = ConfigDict(extra="forbid")

    atoms: List[List[float]] = Field(default_factory=lambda: [[1.0], [-1.0]])
    weights: List[float] = Field(default_factory=lambda: [0.5, 0.5])


class PlanSpec(BaseModel):
    """Sampling plan and worker settings of an experiment."""

    model_config = ConfigDict(extra="forbid")

    n_samples: int = Field(default=2000, ge=1)
    base_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    crn_tag: str = "default"
    workers: Optional[int] = Field(default=None, ge=1)

    def to_plan(self) -> SamplingPlan:
        return SamplingPlan(n_samples=self.n_samples, base_seed=self.base_seed, crn_tag=self.crn_tag)


class VerifySection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    relations: Optional[List[str]] = None  # None: every verify relation that applies
    fd_step: Optional[float] = Field(default=None, gt=0)
    t_fd_step: Optional[float] = Field(default=0.05, gt=0)
    per_row: bool = False


class SweepSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    parameter: Literal["delta", "t", "h", "M", "L"] = "delta"
    values: List[float] = Field(min_length=1)
    quantities: List[str] = Field(
        default_factory=lambda: ["mutual_info", "mmse", "measurement_mmse"]
    )
    relations: List[str] = Field(default_factory=list)


class ScalingSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    l_grid: Optional[List[int]] = None
    relations: List[str] = Field(
        default_factory=lambda: [
            "snr_immse",
            "lemma_mmse_relation",
            "mmse_variation",
            "alpha_immse",
            "log_identity",
            "concentration",
        ]
    )
    t_values: List[float] = Field(default_factory=lambda: [1.0])
    h_window: Tuple[float, float] = (0.05, 0.5)
    h_points: Optional[int] = Field(default=None, ge=2)
    dM: int = Field(default=1, ge=1)


class PathSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_grid: Optional[List[float]] = None
    t_points: Optional[int] = Field(default=None, ge=2)
    h: Optional[float] = Field(default=None, ge=0)


class ExperimentConfig(BaseModel):
    """
    A complete experiment: prior, model, plan, task and task section.

    Unknown keys are rejected at every level.
    """

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    task: Literal["verify", "sweep", "scaling", "path"]
    prior: PriorSpec = Field(default_factory=PriorSpec)
    params: ModelParams
    plan: PlanSpec = Field(default_factory=PlanSpec)
    verify: Optional[VerifySection] = None
    sweep: Optional[SweepSection] = None
    scaling: Optional[ScalingSection] = None
    path: Optional[PathSection] = None
    output_dir: Optional[str] = None

    @model_validator(mode="after")
    def _fill_task_section(self) -> "ExperimentConfig":
        if self.task == "sweep" and self.sweep is None:
            raise ValueError("task 'sweep' needs a 'sweep' section with values")
        if self.task == "verify" and self.verify is None:
            self.verify = VerifySection()
        if self.task == "scaling" and self.scaling is None:
            self.scaling = ScalingSection()
        if self.task == "path" and self.path is None:
            self.path = PathSection()
        return self
