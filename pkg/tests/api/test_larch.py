"""Tests for the simulate, estimate and infer endpoints."""

import pytest
from httpx import AsyncClient

LARCH2 = {"family": "larch", "p": 2, "theta": [5.0, -0.2, 0.4]}
SIM_CFG = {"burn_in": 200, "trunc_K": 5}


async def _simulate(client: AsyncClient, n: int = 400, seed: int | None = 3) -> dict:
    body = {"model": LARCH2, "n": n, "sim_cfg": SIM_CFG}
    if seed is not None:
        body["seed"] = seed
    response = await client.post("/api/v1/simulate", json=body)
    assert response.status_code == 200
    return response.json()


@pytest.mark.asyncio
async def test_simulate_returns_envelope(client: AsyncClient) -> None:
    data = await _simulate(client)
    assert data["schema_version"] == 1
    assert data["n"] == 400
    assert len(data["x"]) == 400
    assert data["meta"]["seed"] == [3]
    again = await _simulate(client)
    assert again["x"] == data["x"]


@pytest.mark.asyncio
async def test_simulate_seed_falls_back_to_env(
    client: AsyncClient, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setenv("LARCH_SEED", "42")
    data = await _simulate(client, seed=None)
    assert data["meta"]["seed"] == [42]
    monkeypatch.delenv("LARCH_SEED")
    data = await _simulate(client, seed=None)
    assert data["meta"]["seed"] == [0]


@pytest.mark.asyncio
async def test_simulate_rejects_bad_theta(client: AsyncClient) -> None:
    body = {"model": {"family": "larch", "p": 1, "theta": [-1.0, 0.2]}, "n": 10}
    response = await client.post("/api/v1/simulate", json=body)
    assert response.status_code == 400
    assert response.json()["error"] == "ArgumentError"

    body = {"model": {"family": "longmemory", "theta": [1.0, 0.2, 0.6]}, "n": 10}
    response = await client.post("/api/v1/simulate", json=body)
    assert response.status_code == 422
    assert response.json()["error"] == "DomainError"


@pytest.mark.asyncio
async def test_simulate_validates_request(client: AsyncClient) -> None:
    response = await client.post("/api/v1/simulate", json={"model": LARCH2, "n": 0})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_estimate_then_infer(client: AsyncClient) -> None:
    x = (await _simulate(client, n=600))["x"]
    body = {
        "model": {"family": "larch", "p": 2},
        "x": x,
        "kind": {"method": "lav"},
        "fit_opts": {"starts": 2},
        "seed": 1,
    }
    response = await client.post("/api/v1/estimate", json=body)
    assert response.status_code == 200
    estimate = response.json()
    assert estimate["n"] == 600
    assert len(estimate["theta_hat"]) == 3

    response = await client.post(
        "/api/v1/infer", json={"x": x, "estimate": estimate, "level": 0.9, "rescale": True}
    )
    assert response.status_code == 200
    report = response.json()
    assert [ci["coordinate"] for ci in report["intervals"]] == ["a0", "a1", "a2"]
    assert len(report["covariance"]["cov"]) == 3
    assert len(report["theta_l2"]) == 3


@pytest.mark.asyncio
async def test_estimate_degenerate_series(client: AsyncClient) -> None:
    body = {"model": {"family": "larch", "p": 1}, "x": [0.0] * 20}
    response = await client.post("/api/v1/estimate", json=body)
    assert response.status_code == 422
    assert response.json()["error"] == "DegenerateInputError"


@pytest.mark.asyncio
async def test_estimate_sqml_needs_h(client: AsyncClient) -> None:
    body = {"model": {"family": "larch", "p": 1}, "x": [1.0, 2.0], "kind": {"method": "sqml"}}
    response = await client.post("/api/v1/estimate", json=body)
    assert response.status_code == 422
