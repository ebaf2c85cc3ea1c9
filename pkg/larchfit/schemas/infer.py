"""Pydantic models for asymptotic inference."""

from pydantic import BaseModel, ConfigDict, Field

from larchfit.schemas.types import FloatMatrix


class SandwichCovariance(BaseModel):
    """(sigma_xi2_hat - 1) Gamma1^-1 Gamma2 Gamma1^-1 / n and its ingredients."""

    gamma1_hat: FloatMatrix
    gamma2_hat: FloatMatrix
    sigma_xi2_hat: float
    cov: FloatMatrix
    n: int
    condition_number: float

    model_config = ConfigDict(arbitrary_types_allowed=True)


class ConfidenceInterval(BaseModel):
    coordinate: str
    estimate: float
    lower: float
    upper: float
    half_width: float


class InferenceReport(BaseModel):
    """Sandwich covariance plus per-coordinate intervals."""

    schema_version: int
    level: float = Field(..., gt=0, lt=1)
    covariance: SandwichCovariance
    intervals: list[ConfidenceInterval]
    guard_hits: int
    # theta_hat in the ||xi||_2 = 1 parametrisation, when requested
    theta_l2: list[float] | None = None
