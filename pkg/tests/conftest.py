"""Pytest fixtures: app, async HTTP client, reference models and the --runslow switch."""

from collections.abc import AsyncGenerator

import numpy as np
import pytest
from fastapi import FastAPI
from httpx import ASGITransport, AsyncClient

from larchfit.main import app
from larchfit.schemas.model import ModelDefinition, ModelSpec
from larchfit.schemas.noise import NoiseSpec
from larchfit.schemas.trajectory import SimConfig, Trajectory
from larchfit.services.simulate_service import simulate


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run Monte-Carlo acceptance tests"
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep tests independent of a developer's LARCH_SEED or MC_WORKERS."""
    monkeypatch.delenv("LARCH_SEED", raising=False)
    monkeypatch.delenv("MC_WORKERS", raising=False)


@pytest.fixture
def app_instance() -> FastAPI:
    """Return the FastAPI app."""
    app.state.test_mode = True
    return app


@pytest.fixture
async def client(app_instance: FastAPI) -> AsyncGenerator[AsyncClient, None]:
    """Async HTTP client for testing the app."""
    transport = ASGITransport(app=app_instance)
    async with AsyncClient(transport=transport, base_url="http://test") as ac:
        yield ac


@pytest.fixture
def larch2() -> ModelDefinition:
    """LARCH(2) with theta = (5, -0.2, 0.4)."""
    return ModelDefinition(family="larch", p=2, theta=[5.0, -0.2, 0.4])


@pytest.fixture
def larch1() -> ModelDefinition:
    return ModelDefinition(family="larch", p=1, theta=[1.0, 0.3])


@pytest.fixture
def glarch11() -> ModelDefinition:
    return ModelDefinition(family="glarch", p=1, q=1, theta=[2.0, 0.3, -0.6])


@pytest.fixture
def long_memory() -> ModelDefinition:
    return ModelDefinition(family="longmemory", theta=[1.0, 0.2, 0.1])


@pytest.fixture
def gaussian() -> NoiseSpec:
    return NoiseSpec.gaussian()


@pytest.fixture
def larch2_path(larch2: ModelDefinition, gaussian: NoiseSpec) -> Trajectory:
    """n=1000 LARCH(2) trajectory, seed 11."""
    return simulate(larch2, gaussian, 1000, SimConfig(burn_in=500, trunc_K=10), seed=11)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def larch1_spec() -> ModelSpec:
    return ModelSpec.larch(1)
