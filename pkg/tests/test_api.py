import pytest
from fastapi import FastAPI
from fastapi.testclient import TestClient

from app.api.routes import router
from app.models.schemas import ComplexPayload, SheafPayload
from app.services.generator_service import generator_service
from app.services.sheaf_service import sheaf_service
from tests.conftest import CONIC


@pytest.fixture(scope="module")
def client():
    app = FastAPI()
    app.include_router(router, prefix="/api")
    return TestClient(app)


@pytest.fixture(scope="module")
def line_payload(client):
    response = client.post("/api/generate", json={"kind": "bergman", "uniform": [2, 3]})
    assert response.status_code == 200
    return response.json()


def test_generate_tropical_line(line_payload):
    assert len(line_payload["rays"]) == 4
    assert line_payload["ambient_dim"] == 2


def test_betti_table(client, line_payload):
    response = client.post("/api/betti", json={
        "complex": line_payload, "sheaf": "f", "variant": "bm", "all_p": True,
    })
    assert response.status_code == 200
    assert response.json()["rows"] == [[0, 2], [0, 1]]


def test_single_betti_row(client, line_payload):
    response = client.post("/api/betti", json={
        "complex": line_payload, "sheaf": "f", "variant": "usual", "p": 1,
    })
    assert response.json()["rows"] == [[2, 0]]


def test_print(client):
    cube = client.post("/api/generate", json={"kind": "cube", "d": 2}).json()
    response = client.post("/api/print", json={"complex": cube, "sheaf": "constant", "variant": "usual"})
    assert response.status_code == 200
    assert response.json()["text"].splitlines()[1] == "k^0 --> k^1 --> k^4 --> k^4 --> k^0"


def test_info_and_validate(client):
    conic = client.post("/api/generate", json={"kind": "hypersurface", "polynomial": CONIC}).json()
    info = client.post("/api/info", json=conic).json()
    assert info["f_vector"] == [2, 5]
    report = client.post("/api/validate", json=conic).json()
    assert report["ok"] is True


def test_bad_polynomial_is_a_client_error(client):
    response = client.post("/api/generate", json={"kind": "hypersurface", "polynomial": "max(0,x"})
    assert response.status_code == 400
    assert "position 7" in response.json()["detail"]


def test_invalid_complex_is_a_client_error(client):
    response = client.post("/api/info", json={"ambient_dim": 1, "rays": [[1, 0], [1, 0]], "maximal_cells": [[0], [1]]})
    assert response.status_code == 400


def test_chain_export_and_homology(client, line_payload):
    exported = client.post("/api/chain", json={
        "complex": line_payload, "sheaf": "f", "variant": "bm", "p": 1,
    })
    assert exported.status_code == 200
    response = client.post("/api/homology", json=exported.json())
    assert response.status_code == 200
    assert response.json()["betti"] == [0, 1]
    assert response.json()["dims"] == [2, 3]


def test_betti_of_a_hand_built_sheaf(client):
    square = generator_service.cube_complex(2)
    payload = SheafPayload.from_sheaf(sheaf_service.constant_cosheaf(square))
    response = client.post("/api/betti", json={
        "complex": ComplexPayload.from_complex(square).model_dump(),
        "sheaf_data": payload.model_dump(mode="json"),
        "variant": "usual",
    })
    assert response.status_code == 200
    assert response.json()["rows"] == [[1, 0, 0]]
    assert response.json()["sheaf"] is None


def test_homology_rejects_bad_entries(client):
    response = client.post("/api/homology", json={
        "direction": "chain", "differentials": [[["abc"]], []], "dims": [1, 1],
    })
    assert response.status_code == 400
