"""
Unit tests for API
"""
import json

import pytest
from fastapi.testclient import TestClient

from backend.config import DEFAULT_FIXTURE_DIR, get_settings
from backend.main import app

client = TestClient(app)


def _state(name):
    return json.loads((DEFAULT_FIXTURE_DIR / name).read_text(encoding="utf-8"))


def test_health_check():
    """Test health check"""
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_compile():
    response = client.post("/api/v1/compile", json=_state("xi2.json"))
    assert response.status_code == 200
    assert response.json()["m_prime"] == 2


def test_compile_invariant_violation_is_422():
    payload = {"n_qubits": 1, "terms": [{"amplitude": [0.5, 0], "vector": 0}]}
    response = client.post("/api/v1/compile", json=payload)
    assert response.status_code == 422
    assert response.json()["error"] == "InvariantViolation"


def test_compile_malformed_body():
    response = client.post("/api/v1/compile", json={"n_qubits": 0, "terms": []})
    assert response.status_code == 422


def test_teleport_records_run():
    response = client.post("/api/v1/teleport", json={"state": _state("xi1.json")})
    assert response.status_code == 200
    body = response.json()
    assert body["ebits"] == 1
    assert body["fidelity"] == pytest.approx(1.0, abs=1e-10)

    runs = client.get("/api/v1/runs").json()
    assert runs["transcripts"][0]["id"] == body["run_id"]
    assert runs["transcripts"][0]["ebits"] == 1


def test_teleport_controlled_and_bidirectional():
    body = client.post(
        "/api/v1/teleport",
        json={"state": _state("xi1.json"), "controlled": True, "disclose": False, "mode": "sampled", "seed": 3},
    ).json()
    assert body["withheld_bits"] == 1
    assert len(body["outcomes"]) == 2

    body = client.post("/api/v1/teleport", json={"state": _state("xi1.json"), "reverse": _state("xi2.json")}).json()
    assert body["ebits"] == 3


def test_teleport_withhold_needs_controller():
    response = client.post("/api/v1/teleport", json={"state": _state("xi1.json"), "disclose": False})
    assert response.status_code == 400
    response = client.post(
        "/api/v1/teleport", json={"state": _state("xi1.json"), "reverse": _state("xi2.json"), "disclose": False}
    )
    assert response.status_code == 400


def test_sampled_teleport_without_seed_uses_default():
    """Unseeded sampled requests can be replayed from the stored seed"""
    body = client.post("/api/v1/teleport", json={"state": _state("xi2.json"), "mode": "sampled"}).json()
    assert body["seed"] == get_settings().default_seed

    replay = client.post(
        "/api/v1/teleport", json={"state": _state("xi2.json"), "mode": "sampled", "seed": body["seed"]}
    ).json()
    assert replay["outcomes"] == body["outcomes"]


def test_verify_table1():
    response = client.get("/api/v1/verify-table1", params={"teleport": False})
    assert response.status_code == 200
    assert response.json()["all_passed"] is True


def test_experiment_records_run():
    response = client.post("/api/v1/experiment", json={"analytic": True})
    assert response.status_code == 200
    body = response.json()
    assert body["fidelities"]["theory_vs_teleported"] == pytest.approx(1.0, abs=1e-6)

    runs = client.get("/api/v1/runs", params={"limit": 1}).json()
    assert [r["id"] for r in runs["experiments"]] == [body["run_id"]]


def test_fidelity_endpoint():
    payload = {"rho1": {"real": [[1, 0], [0, 0]]}, "rho2": {"real": [[0.5, 0], [0, 0.5]]}}
    response = client.post("/api/v1/fidelity", json=payload)
    assert response.status_code == 200
    assert response.json()["fidelity"] == pytest.approx(0.5 ** 0.5, abs=1e-6)


def test_fidelity_dimension_mismatch_is_400():
    payload = {"rho1": {"real": [[1, 0], [0, 0]]}, "rho2": {"real": [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}}
    response = client.post("/api/v1/fidelity", json=payload)
    assert response.status_code == 400
