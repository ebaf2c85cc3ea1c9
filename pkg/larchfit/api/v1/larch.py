"""API endpoints for simulation, estimation and inference on single trajectories."""

import logging

from fastapi import APIRouter
from starlette.concurrency import run_in_threadpool

from larchfit.config import get_settings
from larchfit.schemas.estimate import EstimateResult
from larchfit.schemas.infer import InferenceReport
from larchfit.schemas.requests import EstimateRequest, InferRequest, SimulateRequest
from larchfit.schemas.trajectory import SimConfig, TrajectoryEnvelope
from larchfit.services.estimate_service import fit
from larchfit.services.infer_service import run_inference
from larchfit.services.io_service import trajectory_envelope
from larchfit.services.simulate_service import simulate

logger = logging.getLogger(__name__)

router = APIRouter(tags=["larch"])


@router.post("/simulate", response_model=TrajectoryEnvelope)
async def simulate_trajectory(request: SimulateRequest) -> TrajectoryEnvelope:
    """Simulate n observations; the same seed always returns the same path."""
    settings = get_settings()
    seed = settings.resolve_seed(request.seed)
    cfg = request.sim_cfg or SimConfig(burn_in=settings.BURN_IN, trunc_K=settings.SIM_TRUNC_K)
    logger.info(f"Simulating {request.model.family} n={request.n} seed={seed}")
    trajectory = await run_in_threadpool(
        simulate, request.model, request.noise, request.n, cfg, seed
    )
    return trajectory_envelope(trajectory)


@router.post("/estimate", response_model=EstimateResult)
async def estimate(request: EstimateRequest) -> EstimateResult:
    """Minimise the requested contrast over the model's search box."""
    seed = get_settings().resolve_seed(request.seed)
    logger.info(f"Fitting {request.model.family} by {request.kind.label} on n={len(request.x)}")
    return await run_in_threadpool(
        fit, request.model, request.x, request.kind, request.fit_opts, seed
    )


@router.post("/infer", response_model=InferenceReport)
async def infer(request: InferRequest) -> InferenceReport:
    """Sandwich covariance and confidence intervals for a previous fit."""
    return await run_in_threadpool(
        run_inference, request.estimate, request.x, request.level, request.rescale
    )
