"""Health check endpoints."""

import numpy as np
import scipy
from fastapi import APIRouter

from larchfit.config import get_settings

router = APIRouter(prefix="/health", tags=["health"])


@router.get("")
async def health() -> dict[str, str]:
    """Basic liveness: returns 200 and status ok."""
    return {"status": "ok"}


@router.get("/versions")
async def health_versions() -> dict[str, str | int]:
    """Numerical stack and schema version the service runs with."""
    return {
        "status": "ok",
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "schema_version": get_settings().SCHEMA_VERSION,
    }
