"""Service for reading and writing trajectories, configs and reports."""

import json
import logging
from pathlib import Path
from typing import TypeVar

import numpy as np
import numpy.typing as npt
import pandas as pd
from pydantic import BaseModel, ValidationError

from larchfit.config import get_settings
from larchfit.exceptions import ConfigError, DegenerateInputError
from larchfit.schemas.experiment import McReport
from larchfit.schemas.trajectory import Trajectory, TrajectoryEnvelope
from larchfit.services.mc_service import report_frame

logger = logging.getLogger(__name__)

SERIES_COLUMN = "x"

M = TypeVar("M", bound=BaseModel)


def write_series_csv(x: Trajectory | npt.ArrayLike, path: Path) -> None:
    """One value per line under the header "x", shortest round-trip decimal form."""
    values = x.x if isinstance(x, Trajectory) else np.asarray(x, dtype=np.float64)
    frame = pd.DataFrame({SERIES_COLUMN: values})
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.debug(f"wrote {values.shape[0]} values to {path}")


def read_series_csv(path: Path) -> npt.NDArray[np.float64]:
    """Series written by write_series_csv; the values come back bit-exact."""
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        raise DegenerateInputError(f"{path} holds no data") from None
    if SERIES_COLUMN not in frame.columns:
        raise ConfigError(f"{path} has no '{SERIES_COLUMN}' column")
    values = frame[SERIES_COLUMN].to_numpy(dtype=np.float64)
    if values.shape[0] == 0:
        raise DegenerateInputError(f"{path} holds no observations")
    return values


def parse_json(text: str, model: type[M], source: str = "<input>") -> M:
    """Validate a JSON document; syntax errors keep their line and column."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_json(path: Path, model: type[M]) -> M:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json(text, model, str(path))


def dump_json(model: BaseModel) -> str:
    """Stable JSON text: field order fixed by the schema, sorted keys, trailing newline."""
    payload = json.loads(model.model_dump_json())
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_json(model: BaseModel, path: Path) -> None:
    path.write_text(dump_json(model), encoding="utf-8")


def trajectory_envelope(trajectory: Trajectory) -> TrajectoryEnvelope:
    return TrajectoryEnvelope(
        schema_version=get_settings().SCHEMA_VERSION,
        n=trajectory.n,
        x=trajectory.x.tolist(),
        meta=trajectory.meta,
    )


def write_trajectory(trajectory: Trajectory, path: Path) -> None:
    """CSV for a .csv suffix, the JSON envelope otherwise."""
    if path.suffix.lower() == ".csv":
        write_series_csv(trajectory, path)
    else:
        write_json(trajectory_envelope(trajectory), path)


def read_series(path: Path) -> npt.NDArray[np.float64]:
    """Observed values from a CSV series or a JSON trajectory envelope."""
    if path.suffix.lower() == ".csv":
        return read_series_csv(path)
    envelope = load_json(path, TrajectoryEnvelope)
    return np.asarray(envelope.x, dtype=np.float64)


def write_report_csv(report: McReport, path: Path) -> None:
    report_frame(report).to_csv(path, index=False, lineterminator="\n")
