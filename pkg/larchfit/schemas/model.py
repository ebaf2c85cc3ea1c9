"""Pydantic models for coefficient families and parameter vectors."""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from larchfit.schemas.types import FloatMatrix, FloatVector


class Family(StrEnum):
    """Parametric family of the LARCH(inf) coefficients."""

    LARCH = "larch"
    GLARCH = "glarch"
    LONG_MEMORY = "longmemory"


class ModelSpec(BaseModel):
    """Coefficient family and its orders; the parameter dimension follows from them."""

    family: Family
    p: int | None = Field(default=None, ge=1)
    q: int | None = Field(default=None, ge=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_orders(self) -> "ModelSpec":
        if self.family in (Family.LARCH, Family.GLARCH) and self.p is None:
            raise ValueError(f"{self.family} requires p >= 1")
        if self.family == Family.GLARCH and self.q is None:
            raise ValueError("glarch requires q >= 1")
        if self.family == Family.LARCH and self.q is not None:
            raise ValueError("larch takes no q")
        if self.family == Family.LONG_MEMORY and (self.p is not None or self.q is not None):
            raise ValueError("longmemory takes neither p nor q")
        return self

    @property
    def d(self) -> int:
        """Parameter dimension: p+1, p+q+1 or 3."""
        match self.family:
            case Family.LARCH:
                return self.p_order + 1
            case Family.GLARCH:
                return self.p_order + self.q_order + 1
            case Family.LONG_MEMORY:
                return 3

    @property
    def p_order(self) -> int:
        return self.p or 0

    @property
    def q_order(self) -> int:
        return self.q or 0

    @property
    def order(self) -> int:
        """Smallest admissible truncation order K."""
        match self.family:
            case Family.LARCH:
                return self.p_order
            case Family.GLARCH:
                return max(self.p_order, self.q_order)
            case Family.LONG_MEMORY:
                return 1

    @classmethod
    def larch(cls, p: int) -> "ModelSpec":
        return cls(family=Family.LARCH, p=p)

    @classmethod
    def glarch(cls, p: int, q: int) -> "ModelSpec":
        return cls(family=Family.GLARCH, p=p, q=q)

    @classmethod
    def long_memory(cls) -> "ModelSpec":
        return cls(family=Family.LONG_MEMORY)


class ParamVector(BaseModel):
    """Parameter vector theta, interpreted by the family it belongs to."""

    theta: list[float] = Field(..., min_length=1)


class ModelDefinition(ModelSpec):
    """JSON form of a model: {"family", "p", "q", "theta"}; theta may be omitted for fitting."""

    theta: list[float] | None = None

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec(family=self.family, p=self.p, q=self.q)

    @property
    def params(self) -> ParamVector:
        if self.theta is None:
            raise ValueError("model definition carries no theta")
        return ParamVector(theta=self.theta)


class CoefficientTable(BaseModel):
    """Expanded coefficients a_0..a_K and, optionally, their d x (K+1) gradients."""

    a: FloatVector
    K: int = Field(..., ge=0)
    grads: FloatMatrix | None = None

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @property
    def intercept(self) -> float:
        return float(self.a[0])

    @property
    def slopes(self) -> FloatVector:
        """a_1..a_K."""
        return self.a[1:]
