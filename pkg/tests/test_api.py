import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_get_preset(client):
    response = client.get("/api/presets/datacenter")
    assert response.status_code == 200
    body = response.json()
    assert body["scenario"]["variant"] == "datacenter"
    assert body["traffic"]["variant"] == "on_off"


def test_unknown_preset_is_404(client):
    assert client.get("/api/presets/satellite").status_code == 404


def test_sync_run(client, small_config):
    response = client.post("/api/experiments/run/sync", json=small_config)
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "completed"
    assert body["success"] is True
    assert [run["run_id"] for run in body["summary"]["runs"]] == [0, 1, 2]

    stored = client.get(f"/api/experiments/{body['id']}")
    assert stored.status_code == 200
    assert stored.json()["summary"] == body["summary"]


def test_invalid_document_is_422(client):
    response = client.post(
        "/api/experiments/run/sync",
        json={"scenario": {"variant": "datacenter", "pods": 3}},
    )
    assert response.status_code == 422
    body = response.json()
    assert body["success"] is False
    assert body["status"] == "failed"
    assert "arity" in body["message"]


def test_async_run_completes(client, small_config):
    response = client.post("/api/experiments/run/async", json=small_config)
    assert response.status_code == 202
    experiment_id = response.json()["id"]

    details = client.get(f"/api/experiments/{experiment_id}").json()
    assert details["status"] == "completed"
    assert len(details["summary"]["runs"]) == 3


def test_async_rejects_invalid_document(client):
    response = client.post("/api/experiments/run/async", json={"ensemble_size": 2})
    assert response.status_code == 422


def test_unknown_experiment_is_404(client):
    assert client.get("/api/experiments/not-an-id").status_code == 404


def test_api_key_is_enforced_when_configured(client, monkeypatch):
    monkeypatch.setenv("API_KEY", "lab-secret")
    assert client.get("/api/presets/internet").status_code == 401
    wrong = client.get("/api/presets/internet", headers={"X-API-Key": "nope"})
    assert wrong.status_code == 401
    right = client.get("/api/presets/internet", headers={"X-API-Key": "lab-secret"})
    assert right.status_code == 200
    assert client.get("/health").status_code == 200
