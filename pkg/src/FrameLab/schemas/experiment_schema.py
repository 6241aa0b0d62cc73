"""Experiment configuration and report models."""

import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type

from pydantic import BaseModel, ConfigDict, Field, model_validator

from FrameLab.config import DEFAULT_OUTPUT_DIR, DEFAULT_SEED, EXPERIMENT_TIMEOUT, MAX_DENSE_DIM, RANDOM_PROBES

ExperimentKind = Literal["carleson", "represent", "approximate", "hypercyclic", "diagnostics"]


class _Parameters(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class CarlesonParameters(_Parameters):
    """
    Carleson orbit experiment.

    ``sequence`` selects the eigenvalues: the geometric family ``1 - alpha**-k``, the harmonic family ``1 - 1/k``
    or an explicit ``lambdas`` list of ``[re, im]`` pairs.
    """

    sequence: Literal["geometric", "harmonic", "list"] = "geometric"
    alpha: float = Field(default=2.0, gt=1)
    K: int = Field(default=10, ge=2, le=MAX_DENSE_DIM)
    lambdas: Optional[List[Tuple[float, float]]] = None
    orbit_length: int = Field(default=80, ge=2)
    profile_lengths: List[int] = Field(default_factory=lambda: [20, 40, 80])
    drop: int = Field(default=3, ge=0)
    m_weights: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_sequence(self) -> "CarlesonParameters":
        if self.sequence == "list" and not self.lambdas:
            raise ValueError("lambdas are required when sequence = 'list'")
        if self.drop >= self.orbit_length:
            raise ValueError("drop must be smaller than orbit_length")
        if any(length < 1 for length in self.profile_lengths):
            raise ValueError("profile lengths must be positive")
        return self


class RepresentParameters(_Parameters):
    frame_source: str = "onb(6)"
    dual_source: Optional[str] = None
    hardy_N: int = Field(default=0, ge=0)


class ApproximateParameters(_Parameters):
    frame_source: str = "onb(8)"
    lam: float = Field(default=math.sqrt(2.0), gt=1, alias="lambda")
    j: int = Field(default=3, ge=1, le=40)
    schedule: Literal["general", "dyadic", "dyadic_unrestricted", "dyadic_bounded_support"] = "general"

    @property
    def epsilon(self) -> float:
        return 2.0**-self.j


class HypercyclicParameters(_Parameters):
    frame_source: str = "onb(10)"
    a: float = Field(default=2.0, gt=1)
    j: int = Field(default=3, ge=1, le=40)
    sections: List[int] = Field(default_factory=lambda: [20, 200])
    budget: int = Field(default=64, ge=0)

    @property
    def epsilon(self) -> float:
        return 2.0**-self.j


class DiagnosticsParameters(_Parameters):
    frame_source: str = "onb(8)"
    n_max: int = Field(default=32, ge=1)
    probes: int = Field(default=RANDOM_PROBES, ge=1)


PARAMETER_MODELS: Dict[str, Type[_Parameters]] = {
    "carleson": CarlesonParameters,
    "represent": RepresentParameters,
    "approximate": ApproximateParameters,
    "hypercyclic": HypercyclicParameters,
    "diagnostics": DiagnosticsParameters,
}


class ExperimentConfig(BaseModel):
    """
    One experiment: its kind, the kind-specific parameter map, the output directory, the seed and the wall-clock
    budget in seconds.

    ``parameters`` stays a plain mapping here so that the field names of a failing parameter can be reported
    relative to the parameter table; `typed_parameters` validates it against the model for ``kind``.
    """

    model_config = ConfigDict(extra="forbid")

    kind: ExperimentKind
    parameters: Dict[str, Any] = Field(default_factory=dict)
    output: Path = DEFAULT_OUTPUT_DIR
    seed: int = DEFAULT_SEED
    timeout: float = Field(default=EXPERIMENT_TIMEOUT, gt=0)

    def typed_parameters(self) -> _Parameters:
        return PARAMETER_MODELS[self.kind].model_validate(self.parameters)


class Verdict(BaseModel):
    name: str
    invariant: str
    passed: bool
    detail: str = ""


class Table(BaseModel):
    header: List[str]
    rows: List[List[Any]]


class RunReport(BaseModel):
    """
    Result of one experiment.

    Only the config echo, the measured values and the verdicts go into report.json. Tables are written as CSV,
    artifacts as separate JSON files and the wall time into timing.json.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ExperimentKind
    seed: int
    parameters: Dict[str, Any]
    measured: Dict[str, Any] = Field(default_factory=dict)
    verdicts: List[Verdict] = Field(default_factory=list)
    tables: Dict[str, Table] = Field(default_factory=dict, exclude=True)
    artifacts: Dict[str, Any] = Field(default_factory=dict, exclude=True)
    wall_time: float = Field(default=0.0, exclude=True)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failing(self) -> List[str]:
        return [v.invariant for v in self.verdicts if not v.passed]
