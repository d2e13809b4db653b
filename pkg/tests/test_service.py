"""HTTP service endpoints: payload shapes, certificates, error mapping."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from gysin.bundles import FourManifoldModel
from gysin.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/v1/health").json()
    assert body["status"] == "ok"
    assert body["schema_version"] == "1"


def test_generators_hol(client):
    resp = client.post("/v1/generators", json={"ring": "hol", "maxdeg": 2})
    body = resp.json()
    assert [row["name"] for row in body["rows"]] == [
        "kappa_1",
        "m_{0,1}",
        "m_{-1,2}",
    ]


def test_generators_pic(client):
    resp = client.post(
        "/v1/generators", json={"ring": "pic", "g": 6, "k": 0, "maxdeg": 2}
    )
    assert len(resp.json()["rows"]) == 2


def test_generators_bigraded(client):
    resp = client.post(
        "/v1/generators",
        json={"ring": "bigraded", "variant": "boundary", "maxdeg": 2},
    )
    rows = resp.json()["rows"]
    assert {"name": "x_{0,1}", "degree": 2, "bidegree": [1, 1]} in rows


def test_generators_unknown_ring(client):
    resp = client.post("/v1/generators", json={"ring": "nope"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "DomainError"


def test_pic_needs_parameters(client):
    resp = client.post("/v1/generators", json={"ring": "pic"})
    assert resp.status_code == 422


def test_hilbert_series(client):
    resp = client.post(
        "/v1/hilbert", json={"ring": "pic", "g": 6, "k": 0, "maxdeg": 4}
    )
    assert resp.json()["coefficients"] == [1, 0, 2, 0, 7]


def test_hilbert_bigraded(client):
    resp = client.post(
        "/v1/hilbert",
        json={"ring": "bigraded", "variant": "closed", "maxdeg": 2},
    )
    coeffs = resp.json()["coefficients"]
    assert {"p": 1, "q": 1, "count": 1} not in coeffs
    assert {"p": 0, "q": 2, "count": 1} in coeffs


def test_hilbert_collapse(client):
    resp = client.post(
        "/v1/hilbert",
        json={"check_collapse": True, "g": 6, "k": 0, "maxdeg": 8},
    )
    body = resp.json()
    assert body["passed"] is True
    assert any(row["check"] == "pic-collapse" for row in body["rows"])


def test_grr_numeric(client):
    body = client.post("/v1/grr", json={"r": 1, "s": 1}).json()
    assert body["degree2"] == {"lambda": "13", "zeta": "-1", "m01": "2"}
    assert body["witness"] == [13, -1, 2]
    assert body["integral"] is True
    assert body["closed_form_match"] is True
    assert body["passed"] is True


def test_grr_symbolic(client):
    body = client.post("/v1/grr", json={"symbolic": True}).json()
    assert body["degree2"]["lambda"] == "1 + 6*r + 6*r^2"
    assert body["integral"] is None
    assert body["passed"] is True


def test_grr_requires_parameters(client):
    resp = client.post("/v1/grr", json={})
    assert resp.status_code == 422


def test_basis_check_default(client):
    body = client.post("/v1/basis-check", json={}).json()
    assert body["vectors"] == [[1, 0, 0], [0, 2, 1], [0, -1, 0]]
    assert body["determinant"] == 1
    assert body["passed"] is True


def test_basis_check_single_model(client):
    body = client.post(
        "/v1/basis-check", json={"models": ["hirzebruch"]}
    ).json()
    assert body["vectors"] == [[0, -1, 0]]
    assert "determinant" not in body


def test_basis_check_degenerate_custom_model(client):
    custom = FourManifoldModel.hirzebruch().to_json_dict()
    custom["line"] = [0, 0]
    body = client.post(
        "/v1/basis-check",
        json={"custom_model": custom, "models": ["declared", "trivial"]},
    ).json()
    assert body["determinant"] == 0
    assert body["passed"] is False


def test_basis_check_unknown_model(client):
    resp = client.post("/v1/basis-check", json={"models": ["torus"]})
    assert resp.status_code == 422


def test_orders_grid(client):
    body = client.post(
        "/v1/orders", json={"g_min": 2, "g_max": 4, "k_min": -1, "k_max": 1}
    ).json()
    assert len(body["rows"]) == 9
    first = body["rows"][0]
    assert (first["g"], first["k"]) == (2, -1)
    assert first["h3_pic_order"] == 2


def test_orders_single_point(client):
    body = client.post(
        "/v1/orders", json={"g_min": 6, "g_max": 6, "k_min": 0, "k_max": 0}
    ).json()
    assert body["rows"][0]["h3_pic_order"] == 5
    assert body["rows"][0]["section_exists"] is True


def test_restrict_values(client):
    body = client.post(
        "/v1/restrict",
        json={"g": 6, "k": 0, "classes": ["m_{0,1}", "zeta", "kappa_1"]},
    ).json()
    values = {row["name"]: row["value"] for row in body["rows"]}
    assert values == {"m_{0,1}": "-10*x", "zeta": "-5*x", "kappa_1": "0"}


def test_restrict_parse_error_echoes_grammar(client):
    resp = client.post("/v1/restrict", json={"classes": ["m_{0,"]})
    assert resp.status_code == 422
    assert "term :=" in resp.json()["detail"]


def test_certify_all_pass(client):
    body = client.post("/v1/certify", json={"maxdeg": 8}).json()
    names = [c["name"] for c in body["certificates"]]
    assert names == [
        "degree2-closed-form",
        "realization-span",
        "integrality-grid",
        "basis-certificate",
        "torsion-orders",
        "edge-kernel",
        "collapse-consistency",
    ]
    assert all(c["passed"] for c in body["certificates"])
    assert body["passed"] is True


def test_determinism(client):
    payload = {"g_min": 2, "g_max": 5, "k_min": -2, "k_max": 2}
    first = client.post("/v1/orders", json=payload).content
    second = client.post("/v1/orders", json=payload).content
    assert first == second
