"""Request bodies for the v1 API."""

from pydantic import BaseModel, Field

from larchfit.schemas.estimate import ContrastKind, EstimateResult, FitOptions
from larchfit.schemas.model import ModelDefinition, ModelSpec
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig


# Request model for trajectory simulation
class SimulateRequest(BaseModel):
    model: ModelDefinition
    noise: NoiseSpec = Field(default_factory=NoiseSpec.gaussian)
    n: int = Field(..., ge=1, le=1_000_000)
    seed: int | None = Field(default=None, ge=0)
    sim_cfg: SimConfig | None = None


# Request model for a single fit
class EstimateRequest(BaseModel):
    model: ModelSpec
    x: list[float] = Field(..., min_length=2)
    kind: ContrastKind = Field(default_factory=ContrastKind.lav)
    fit_opts: FitOptions = Field(default_factory=FitOptions)
    seed: int | None = Field(default=None, ge=0)


# Request model for sandwich inference on a previous fit
class InferRequest(BaseModel):
    x: list[float] = Field(..., min_length=2)
    estimate: EstimateResult
    level: float = Field(default=0.95, gt=0, lt=1)
    # report theta_hat in the ||xi||_2 = 1 parametrisation as well
    rescale: bool = False
