"""Annotated numpy types usable as pydantic fields."""

from typing import Annotated, Any

import numpy as np
import numpy.typing as npt
from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema


def _to_vector(value: Any) -> npt.NDArray[np.float64]:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {arr.shape}")
    return arr


def _to_matrix(value: Any) -> npt.NDArray[np.float64]:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    return arr


def _to_list(value: npt.NDArray[np.float64]) -> list[Any]:
    return value.tolist()


FloatVector = Annotated[
    np.ndarray,
    BeforeValidator(_to_vector),
    PlainSerializer(_to_list, return_type=list[float]),
    WithJsonSchema({"type": "array", "items": {"type": "number"}}),
]

FloatMatrix = Annotated[
    np.ndarray,
    BeforeValidator(_to_matrix),
    PlainSerializer(_to_list, return_type=list[list[float]]),
    WithJsonSchema({"type": "array", "items": {"type": "array", "items": {"type": "number"}}}),
]
