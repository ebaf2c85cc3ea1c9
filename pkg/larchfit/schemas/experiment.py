"""Pydantic models for Monte-Carlo experiments."""

from pydantic import BaseModel, Field, field_validator

from larchfit.schemas.estimate import ContrastKind, FitOptions
from larchfit.schemas.model import ModelDefinition
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig


class ExperimentConfig(BaseModel):
    """Replicated simulate -> fit pipeline over a list of sample sizes."""

    model: ModelDefinition
    noise: NoiseSpec = Field(default_factory=NoiseSpec.gaussian)
    n_list: list[int] = Field(..., min_length=1)
    reps: int = Field(..., ge=1)
    estimators: list[ContrastKind] = Field(..., min_length=1)
    master_seed: int = Field(default=0, ge=0)
    sim_cfg: SimConfig = Field(default_factory=SimConfig)
    fit_opts: FitOptions = Field(default_factory=FitOptions)
    # bring QML/WLS estimates back to the E|xi| = 1 parametrisation before scoring
    rescale: bool = True
    # name of a published table to quote next to the simulated RMSEs
    reference_table: str | None = None

    @field_validator("n_list")
    @classmethod
    def check_n_list(cls, value: list[int]) -> list[int]:
        if any(n < 2 for n in value):
            raise ValueError("every n must be >= 2")
        if any(b <= a for a, b in zip(value, value[1:], strict=False)):
            raise ValueError("n_list must be strictly ascending")
        return value

    @field_validator("model")
    @classmethod
    def check_theta(cls, value: ModelDefinition) -> ModelDefinition:
        if value.theta is None:
            raise ValueError("experiment model needs theta_star")
        return value


class McCell(BaseModel):
    """RMSE of one coordinate for one estimator at one sample size."""

    estimator: str
    n: int
    coordinate: str
    rmse: float | None
    mean_bias: float | None
    mean_estimate: float | None
    reps_used: int
    failures: int
    reference: float | None = None


class Provenance(BaseModel):
    master_seed: int
    config_hash: str


class McReport(BaseModel):
    """Table of per-(estimator, n, coordinate) RMSEs."""

    schema_version: int
    reps: int
    theta_star: list[float]
    cells: list[McCell]
    provenance: Provenance
    # published table the cells were compared with, if any
    reference_table: str | None = None

    def cell(self, estimator: str, n: int, coordinate: str) -> McCell:
        for c in self.cells:
            if c.estimator == estimator and c.n == n and c.coordinate == coordinate:
                return c
        raise KeyError((estimator, n, coordinate))

    def rmse_vector(self, estimator: str, n: int) -> list[float | None]:
        """RMSEs of every coordinate in parameter order."""
        return [c.rmse for c in self.cells if c.estimator == estimator and c.n == n]
