"""Pydantic models for simulated trajectories."""

from pydantic import BaseModel, ConfigDict, Field

from larchfit.schemas.model import ModelDefinition
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.types import FloatVector


class SimConfig(BaseModel):
    """Burn-in length and coefficient truncation used by the simulator."""

    burn_in: int = Field(default=2000, ge=0)
    trunc_K: int = Field(default=2000, ge=1)


class TrajectoryMeta(BaseModel):
    """Generation metadata attached to a trajectory."""

    seed: list[int]
    burn_in: int = Field(..., ge=0)
    trunc_K: int = Field(..., ge=1)
    model: ModelDefinition
    noise: NoiseSpec


class Trajectory(BaseModel):
    """Observed series X_1..X_n plus how it was generated."""

    x: FloatVector
    meta: TrajectoryMeta

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def n(self) -> int:
        return int(self.x.shape[0])


class TrajectoryEnvelope(BaseModel):
    """JSON export of a trajectory."""

    schema_version: int
    n: int
    x: list[float]
    meta: TrajectoryMeta
