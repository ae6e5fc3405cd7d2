"""
Tests de la API HTTP del laboratorio (httpx sobre ASGI)
"""

import pytest
from httpx import ASGITransport, AsyncClient

from core.base_app import RtoForgeApp
from core.config_manager import DEFAULT_CONFIG


@pytest.fixture
def lab(tmp_path):
    return RtoForgeApp("rto_lab_test", str(tmp_path / "lab_config.json"), DEFAULT_CONFIG)


def client_for(lab):
    return AsyncClient(transport=ASGITransport(app=lab.get_app()), base_url="http://test")


@pytest.mark.asyncio
async def test_health(lab):
    async with client_for(lab) as client:
        response = await client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


@pytest.mark.asyncio
async def test_witness(lab):
    async with client_for(lab) as client:
        ok = await client.post("/witness", json={"alpha": "1/2", "epsilon": "0.125"})
        out_of_range = await client.post("/witness", json={"alpha": "2", "epsilon": "1/8"})
        garbage = await client.post("/witness", json={"alpha": "abc", "epsilon": "1/8"})
    assert ok.status_code == 200
    assert ok.json()["results"][0]["delta"] == 8
    assert ok.json()["results"][0]["epsilon"] == "1/8"
    assert out_of_range.status_code == 400
    assert garbage.status_code == 422


@pytest.mark.asyncio
async def test_trace(lab):
    async with client_for(lab) as client:
        response = await client.post("/trace", json={"samples": ["8"]})
        empty = await client.post("/trace", json={"samples": []})
    assert response.status_code == 200
    row = response.json()["rows"][0]
    assert (row["srtt"], row["rttvar"], row["rto"]) == ("8", "4", "24")
    assert empty.status_code == 422


@pytest.mark.asyncio
async def test_trace_upload(lab):
    async with client_for(lab) as client:
        response = await client.post(
            "/trace/upload",
            files={"file": ("samples.txt", b"8\n16\n", "text/plain")},
            data={"g": "1"},
        )
        bad = await client.post("/trace/upload", files={"file": ("samples.txt", b"8\nx\n", "text/plain")})
    assert response.status_code == 200
    assert response.json()["rows"][1]["rto"] == "29"
    assert bad.status_code == 400


@pytest.mark.asyncio
async def test_bounds(lab):
    payload = {"c": "67.5", "r": "7.5", "srtt_prior": "60", "rttvar_prior": "4", "n": 1, "rule": "eq3"}
    async with client_for(lab) as client:
        response = await client.post("/bounds", json=payload)
        bad_rule = await client.post("/bounds", json={**payload, "rule": "loose"})
    assert response.status_code == 200
    assert response.json()["rttvar_upper"] == "393/128"
    assert "convergence_n" not in response.json()
    assert bad_rule.status_code == 400


@pytest.mark.asyncio
async def test_scenarios(lab):
    async with client_for(lab) as client:
        pathological = await client.post("/scenario/pathological", json={"length": 1000, "g": "1"})
        uniform = await client.post("/scenario/uniform", json={"length": 300, "seed": 1, "include_trace": True})
        unknown = await client.post("/scenario/bursty", json={})
    assert pathological.json()["summary"]["count"] == 10
    assert uniform.json()["summary"]["count"] == 0
    assert len(uniform.json()["trace"]) == 300
    assert unknown.status_code == 404


@pytest.mark.asyncio
async def test_simulate(lab):
    async with client_for(lab) as client:
        response = await client.post("/simulate", json={"n_packets": 5, "min_delay": 3, "max_delay": 3})
        invalid = await client.post("/simulate", json={"n_packets": 5, "min_delay": 4, "max_delay": 2})
    assert response.status_code == 200
    assert [s["rtt"] for s in response.json()["samples"]] == [6] * 5
    assert response.json()["invariant_log"] == []
    assert invalid.status_code == 400


@pytest.mark.asyncio
async def test_replay(lab):
    async with client_for(lab) as client:
        ambiguous = await client.post("/simulate/replay/ambiguous-ack")
        missing = await client.post("/simulate/replay/reordering")
    assert [s["packet_id"] for s in ambiguous.json()["samples"]] == [1]
    ambiguity = ambiguous.json()["ambiguities"][0]
    assert (ambiguity["packet_id"], ambiguity["candidate_rtts"]) == (2, [4, 1])
    assert missing.status_code == 404


@pytest.mark.asyncio
async def test_config_roundtrip(lab):
    async with client_for(lab) as client:
        updated = await client.post("/config", json={"g": "2"})
        rejected = await client.post("/config", json={"alpha": "abc"})
        current = await client.get("/config")
    assert updated.status_code == 200
    assert rejected.status_code == 400
    assert current.json()["config"]["g"] == "2"
    assert current.json()["config"]["alpha"] == "1/8"
    assert current.json()["validation"]["valid"]
