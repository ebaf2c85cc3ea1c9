"""Pydantic models for contrasts, fit options and estimation results."""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from larchfit.schemas.model import ModelSpec


class ContrastMethod(StrEnum):
    LAV = "lav"
    SQML = "sqml"
    WLS = "wls"


class ContrastKind(BaseModel):
    """Contrast to minimise: least absolute values, smoothed QML(h) or weighted LS."""

    method: ContrastMethod
    h: float | None = Field(default=None, gt=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_h(self) -> "ContrastKind":
        if self.method == ContrastMethod.SQML and self.h is None:
            raise ValueError("sqml requires a smoothing parameter h > 0")
        if self.method != ContrastMethod.SQML and self.h is not None:
            raise ValueError(f"{self.method} takes no smoothing parameter")
        return self

    @property
    def label(self) -> str:
        if self.method == ContrastMethod.SQML:
            return f"sqml({self.h:g})"
        return self.method.value

    @classmethod
    def lav(cls) -> "ContrastKind":
        return cls(method=ContrastMethod.LAV)

    @classmethod
    def sqml(cls, h: float) -> "ContrastKind":
        return cls(method=ContrastMethod.SQML, h=h)

    @classmethod
    def wls(cls) -> "ContrastKind":
        return cls(method=ContrastMethod.WLS)


class FitOptions(BaseModel):
    """Search box, multi-start count and stopping rules for the simplex search.

    Unset fields fall back to family defaults (box) or settings (the rest).
    """

    box: list[tuple[float, float]] | None = None
    starts: int | None = Field(default=None, ge=1)
    tol: float | None = Field(default=None, gt=0)
    max_iter: int | None = Field(default=None, ge=1)
    trunc_K: int | None = Field(default=None, ge=1)
    # coordinate index -> pinned value, excluded from the search
    fixed: dict[int, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_box(self) -> "FitOptions":
        if self.box is None:
            return self
        for i, (lo, hi) in enumerate(self.box):
            if not lo < hi:
                raise ValueError(f"box coordinate {i}: lower bound {lo} must be < upper {hi}")
        if self.box and self.box[0][0] <= 0:
            raise ValueError("intercept lower bound must be > 0")
        return self


class EstimateResult(BaseModel):
    """Best local minimiser over all starts and its diagnostics."""

    model: ModelSpec
    theta_hat: list[float]
    contrast: float
    kind: ContrastKind
    converged: bool
    n_evals: int
    start_index: int
    n: int
    trunc_K: int
    # advisory: theta_hat inside Theta(2) at the estimated noise variance
    in_theta2: bool
    theta2_margin: float
