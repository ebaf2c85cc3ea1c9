"""Pydantic models for innovation distributions."""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator


class NoiseKind(StrEnum):
    GAUSSIAN = "gaussian"
    STUDENT = "student"


class NoiseSpec(BaseModel):
    """Innovation law, rescaled so that E|xi| = 1.

    JSON: {"noise": "gaussian"} or {"noise": "student", "nu": 6}.
    """

    noise: NoiseKind = NoiseKind.GAUSSIAN
    nu: int | None = Field(default=None, ge=3)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_nu(self) -> "NoiseSpec":
        if self.noise == NoiseKind.STUDENT and self.nu is None:
            raise ValueError("student noise requires nu >= 3")
        if self.noise == NoiseKind.GAUSSIAN and self.nu is not None:
            raise ValueError("gaussian noise takes no nu")
        return self

    @classmethod
    def gaussian(cls) -> "NoiseSpec":
        return cls(noise=NoiseKind.GAUSSIAN)

    @classmethod
    def student(cls, nu: int) -> "NoiseSpec":
        return cls(noise=NoiseKind.STUDENT, nu=nu)

    @property
    def label(self) -> str:
        return "gaussian" if self.noise == NoiseKind.GAUSSIAN else f"student({self.nu})"


class NoiseMoments(BaseModel):
    """Closed-form moments after L1 scaling; mu4 is +inf when it does not exist."""

    l1: float
    scale: float
    sigma_xi2: float
    mu4: float
    mu4_finite: bool
