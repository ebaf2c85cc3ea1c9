"""Tests for the experiment endpoints."""

import pytest
from httpx import AsyncClient


@pytest.mark.asyncio
async def test_run_pinned_experiment(client: AsyncClient) -> None:
    body = {
        "model": {"family": "larch", "p": 1, "theta": [1.0, 0.2]},
        "n_list": [100],
        "reps": 2,
        "estimators": [{"method": "lav"}],
        "sim_cfg": {"burn_in": 50, "trunc_K": 1},
        "fit_opts": {"fixed": {"0": 1.0, "1": 0.2}},
    }
    response = await client.post("/api/v1/experiments", json=body)
    assert response.status_code == 200
    report = response.json()
    assert report["reps"] == 2
    assert [c["rmse"] for c in report["cells"]] == [0.0, 0.0]
    assert len(report["provenance"]["config_hash"]) == 64


@pytest.mark.asyncio
async def test_experiment_validation(client: AsyncClient) -> None:
    body = {
        "model": {"family": "larch", "p": 1, "theta": [1.0, 0.2]},
        "n_list": [200, 100],
        "reps": 1,
        "estimators": [{"method": "lav"}],
    }
    response = await client.post("/api/v1/experiments", json=body)
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_presets(client: AsyncClient) -> None:
    response = await client.get("/api/v1/experiments/presets")
    assert response.status_code == 200
    assert "table1_gauss" in response.json()

    response = await client.get("/api/v1/experiments/presets/table3_d01")
    assert response.status_code == 200
    assert response.json()["model"]["theta"] == [1.0, 0.2, 0.1]

    response = await client.get("/api/v1/experiments/presets/nope")
    assert response.status_code == 404
