"""
Tests for the HTTP API of the incidence geometry service.
The client runs the startup hook, so every test sees a live orchestrator.
"""

import pytest
from fastapi.testclient import TestClient
from main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


@pytest.fixture(scope="module")
def fano_text(client):
    response = client.post("/api/planes/build", json={"ring": "zmod:2", "kind": "projective"})
    assert response.status_code == 200
    return response.json()["plane_text"]


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "coordinatize" in response.json()["endpoints"]


def test_health_check(client):
    response = client.get("/api/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["components"]["projective"] is True


@pytest.mark.parametrize("ring,local", [("zmod:4", True), ("dual:3", True), ("zmod:6", False)])
def test_check_local(client, ring, local):
    response = client.post("/api/rings/check-local", json={"ring": ring})
    assert response.status_code == 200
    assert response.json()["is_local"] is local


def test_locality_witness_over_z6(client):
    data = client.post("/api/rings/check-local", json={"ring": "zmod:6"}).json()
    assert data["witness"] == ["3", "2"]
    assert data["sequents"]["pt_apart_cotransitive"] is False


def test_bad_ring_descriptor_is_a_bad_request(client):
    response = client.post("/api/rings/check-local", json={"ring": "zmod:x"})
    assert response.status_code == 400
    assert response.json()["detail"].startswith("Invalid input")


def test_build_plane(client):
    response = client.post("/api/planes/build", json={"ring": "zmod:4", "kind": "affine"})
    assert response.status_code == 200
    data = response.json()
    assert (data["n_points"], data["n_lines"]) == (16, 24)
    assert data["plane_text"].startswith("plane affine\npoints 16\nlines 24\n")


def test_build_needs_finite_ring(client):
    response = client.post("/api/planes/build", json={"ring": "rational", "kind": "projective"})
    assert response.status_code == 400


def test_verify_fano(client, fano_text):
    response = client.post("/api/planes/verify", json={"plane_text": fano_text, "seed": 0})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert "AXIOM desargues PASS witness=()" in data["lines"]


def test_verify_rejects_malformed_plane(client):
    response = client.post("/api/planes/verify", json={"plane_text": "plane projective\npoints 2\n"})
    assert response.status_code == 400
    assert "line 2" in response.json()["detail"]


def test_verify_rejects_bad_samples(client, fano_text):
    response = client.post("/api/planes/verify", json={"plane_text": fano_text, "samples": 0})
    assert response.status_code == 422


def test_counterexamples_are_reproduced(client):
    response = client.post("/api/counterexamples")
    assert response.status_code == 200
    findings = response.json()
    assert len(findings) == 7
    assert all(f["reproduced"] for f in findings), findings


def test_coordinatize_fano(client, fano_text):
    response = client.post("/api/coordinatize", json={"plane_text": fano_text, "frame": [3, 1, 0, 6]})
    assert response.status_code == 200
    data = response.json()
    assert data["ring_size"] == 2
    assert data["identified_as"] == "zmod:2"
    assert data["isomorphism"] is True
    assert data["frame"] == [3, 1, 0, 6]


def test_coordinatize_rejects_short_frame(client, fano_text):
    response = client.post("/api/coordinatize", json={"plane_text": fano_text, "frame": [0, 1, 2]})
    assert response.status_code == 400


def test_coordinatize_collinear_frame(client, fano_text):
    response = client.post("/api/coordinatize", json={"plane_text": fano_text, "frame": [0, 1, 2, 3]})
    assert response.status_code == 422


def test_torsor(client):
    response = client.post("/api/torsors/verify", json={"ring": "zmod:2", "kind": "affine", "seed": 0})
    assert response.status_code == 200
    data = response.json()
    assert data["passed"] is True
    assert data["lines"][0] == "TORSOR G(zmod:2) order=24 set=24"


def test_unknown_torsor_kind(client):
    response = client.post("/api/torsors/verify", json={"ring": "zmod:2", "kind": "left"})
    assert response.status_code == 400
