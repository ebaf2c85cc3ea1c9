"""Aggregates all v1 API routers."""

from fastapi import APIRouter

from larchfit.api.v1 import experiments, health, larch

api_router = APIRouter()
api_router.include_router(health.router)
api_router.include_router(larch.router)
api_router.include_router(experiments.router)


def get_router() -> APIRouter:
    """Return the v1 API router (prefix /api/v1 is added in main)."""
    return api_router
