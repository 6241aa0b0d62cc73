"""Pydantic models for experiment configuration and run reports."""

from FrameLab.schemas.experiment_schema import (
    PARAMETER_MODELS,
    ApproximateParameters,
    CarlesonParameters,
    DiagnosticsParameters,
    ExperimentConfig,
    ExperimentKind,
    HypercyclicParameters,
    RepresentParameters,
    RunReport,
    Table,
    Verdict,
)

__all__ = [
    "PARAMETER_MODELS",
    "ApproximateParameters",
    "CarlesonParameters",
    "DiagnosticsParameters",
    "ExperimentConfig",
    "ExperimentKind",
    "HypercyclicParameters",
    "RepresentParameters",
    "RunReport",
    "Table",
    "Verdict",
]
