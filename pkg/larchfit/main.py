"""FastAPI application and lifespan."""

import logging
from collections.abc import AsyncIterator
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from starlette.status import (
    HTTP_400_BAD_REQUEST,
    HTTP_422_UNPROCESSABLE_ENTITY,
)

from larchfit.api.v1.router import get_router
from larchfit.config import get_settings
from larchfit.exceptions import (
    ArgumentError,
    ConfigError,
    DegenerateInputError,
    DomainError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(fastapi_app: FastAPI) -> AsyncIterator[None]:
    """Startup: logging level and settings on app.state."""
    settings = get_settings()
    logging.getLogger("larchfit").setLevel(settings.LOG_LEVEL)
    fastapi_app.state.settings = settings
    logger.info(f"larchfit API starting ({settings.APP_ENV}, schema v{settings.SCHEMA_VERSION})")
    yield


app = FastAPI(
    title="larchfit",
    description="Simulation, estimation and Monte-Carlo benchmarking of LARCH(inf) models.",
    lifespan=lifespan,
)

app.include_router(get_router(), prefix="/api/v1")


def _error(status_code: int, exc: Exception) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


@app.exception_handler(ArgumentError)
@app.exception_handler(ConfigError)
async def bad_request_handler(request: Request, exc: Exception) -> JSONResponse:
    logger.warning(f"{request.url.path}: {exc}")
    return _error(HTTP_400_BAD_REQUEST, exc)


@app.exception_handler(DomainError)
@app.exception_handler(DegenerateInputError)
@app.exception_handler(SingularMatrixError)
async def unprocessable_handler(request: Request, exc: Exception) -> JSONResponse:
    logger.warning(f"{request.url.path}: {exc}")
    return _error(HTTP_422_UNPROCESSABLE_ENTITY, exc)


@app.get("/")
async def root() -> dict[str, str]:
    """Root: simple OK message."""
    return {"message": "larchfit API is running"}
