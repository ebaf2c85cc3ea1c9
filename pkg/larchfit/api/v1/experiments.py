"""API endpoint for Monte-Carlo experiments."""

import logging

from fastapi import APIRouter, HTTPException
from starlette.concurrency import run_in_threadpool
from starlette.status import HTTP_404_NOT_FOUND

from larchfit.presets import PUBLISHED_RMSE, preset
from larchfit.schemas.experiment import ExperimentConfig, McReport
from larchfit.services.mc_service import run_experiment

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/experiments", tags=["experiments"])


@router.post("", response_model=McReport)
async def create_experiment(cfg: ExperimentConfig) -> McReport:
    """Run the experiment synchronously and return its RMSE table."""
    logger.info(f"Experiment: reps={cfg.reps} n_list={cfg.n_list}")
    return await run_in_threadpool(run_experiment, cfg)


@router.get("/presets")
async def list_presets() -> list[str]:
    """Names accepted by GET /experiments/presets/{name}."""
    return sorted(PUBLISHED_RMSE)


@router.get("/presets/{name}", response_model=ExperimentConfig)
async def get_preset(name: str) -> ExperimentConfig:
    """Configuration of a published experiment, ready to POST back."""
    if name not in PUBLISHED_RMSE:
        raise HTTPException(status_code=HTTP_404_NOT_FOUND, detail=f"Unknown preset {name}")
    return preset(name)
