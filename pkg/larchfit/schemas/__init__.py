"""Pydantic schemas for model definitions, results and request/response bodies."""

from larchfit.schemas.estimate import ContrastKind, ContrastMethod, EstimateResult, FitOptions
from larchfit.schemas.experiment import ExperimentConfig, McCell, McReport, Provenance
from larchfit.schemas.infer import ConfidenceInterval, InferenceReport, SandwichCovariance
from larchfit.schemas.model import (
    CoefficientTable,
    Family,
    ModelDefinition,
    ModelSpec,
    ParamVector,
)
from larchfit.schemas.noise import NoiseKind, NoiseMoments, NoiseSpec
from larchfit.schemas.requests import EstimateRequest, InferRequest, SimulateRequest
from larchfit.schemas.trajectory import SimConfig, Trajectory, TrajectoryEnvelope, TrajectoryMeta

__all__ = [
    "CoefficientTable",
    "ConfidenceInterval",
    "ContrastKind",
    "ContrastMethod",
    "EstimateRequest",
    "EstimateResult",
    "ExperimentConfig",
    "Family",
    "FitOptions",
    "InferRequest",
    "InferenceReport",
    "McCell",
    "McReport",
    "ModelDefinition",
    "ModelSpec",
    "NoiseKind",
    "NoiseMoments",
    "NoiseSpec",
    "ParamVector",
    "Provenance",
    "SandwichCovariance",
    "SimConfig",
    "SimulateRequest",
    "Trajectory",
    "TrajectoryEnvelope",
    "TrajectoryMeta",
]
