import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from muxim.service.app import create_app

TOY = {
    "layers": [
        {
            "edges": [[0, 2, 0.5], [1, 2, 0.5]],
            "model": {"kind": "fixed_threshold", "default_threshold": 1.0},
        },
        {"edges": [[0, 1, 0.5]], "model": {"kind": "ic"}},
    ]
}


@pytest.fixture
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_create_get_delete_multiplex(client):
    r = client.post("/multiplexes", json={"multiplex": TOY})
    assert r.status_code == 200
    body = r.json()
    assert body["k"] == 2 and body["users"] == 3 and body["overlap_users"] == 2
    mid = body["multiplex_id"]

    r = client.get(f"/multiplexes/{mid}", params={"include_layers": True})
    assert r.status_code == 200
    assert len(r.json()["layers"]) == 2

    assert client.delete(f"/multiplexes/{mid}").status_code == 200
    assert client.get(f"/multiplexes/{mid}").status_code == 404


def test_estimate_by_id_and_inline(client):
    mid = client.post("/multiplexes", json={"multiplex": TOY}).json()["multiplex_id"]
    by_id = client.post(
        "/estimate",
        json={"multiplex_id": mid, "seeds": [0],
              "config": {"seed": 3, "samples": 30000}},
    ).json()
    inline = client.post(
        "/estimate",
        json={"multiplex": TOY, "seeds": [0], "config": {"seed": 3, "samples": 30000}},
    ).json()
    assert by_id == inline
    assert abs(by_id["sigma"]["mean"] - 2.0) < 0.05
    assert len(by_id["per_layer_activation_means"]) == 2


def test_estimate_requires_exactly_one_source(client):
    r = client.post("/estimate", json={"seeds": [0]})
    assert r.status_code == 422
    mid = client.post("/multiplexes", json={"multiplex": TOY}).json()["multiplex_id"]
    r = client.post(
        "/estimate", json={"multiplex_id": mid, "multiplex": TOY, "seeds": [0]}
    )
    assert r.status_code == 422


@pytest.mark.parametrize("algorithm", ["isf", "ksn", "es", "bsn"])
def test_select_each_algorithm(client, algorithm):
    r = client.post(
        "/select",
        json={
            "multiplex": TOY,
            "algorithm": algorithm,
            "budget": 1,
            "config": {"seed": 2, "samples": 300},
            "options": {"estimator": "exact", "seeder": "brute",
                        "solver": "exact_dp"},
        },
    )
    assert r.status_code == 200, r.text
    body = r.json()
    assert body["seeds"] == [0]
    assert body["budget"] == 1
    if algorithm == "isf":
        assert body["trace"][0]["user"] == 0
    if algorithm == "ksn":
        assert body["budget_split"] == [0, 1]


def test_select_is_deterministic(client):
    req = {
        "multiplex": TOY,
        "algorithm": "isf",
        "budget": 2,
        "config": {"seed": 9, "samples": 500},
    }
    a = client.post("/select", json=req).json()
    b = client.post("/select", json=req).json()
    assert a["seeds"] == b["seeds"]
    assert a["sigma"] == b["sigma"]


def test_experiment_endpoint(client):
    r = client.post(
        "/experiment",
        json={
            "multiplex": TOY,
            "algorithms": ["isf", "es"],
            "budgets": [1, 2],
            "config": {"seed": 4, "samples": 200},
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert len(body["records"]) == 4
    assert body["csv"].splitlines()[0].startswith("algorithm,l,sigma_mean")


def test_mckp_endpoint(client):
    r = client.post(
        "/mckp/solve",
        json={
            "classes": [
                [{"cost": 0, "profit": 0}, {"cost": 1, "profit": 200},
                 {"cost": 2, "profit": 350}, {"cost": 3, "profit": 400},
                 {"cost": 4, "profit": 425}],
                [{"cost": 0, "profit": 0}, {"cost": 1, "profit": 600},
                 {"cost": 2, "profit": 601}, {"cost": 3, "profit": 602},
                 {"cost": 4, "profit": 603}],
                [{"cost": 0, "profit": 0}, {"cost": 1, "profit": 200},
                 {"cost": 2, "profit": 210}, {"cost": 3, "profit": 214},
                 {"cost": 4, "profit": 214}],
            ],
            "budget": 4,
            "solver": "exact_dp",
        },
    )
    body = r.json()
    assert body["picks"] == [2, 1, 1]
    assert body["total_profit"] == 1150.0


def test_validation_errors_are_422(client):
    bad = {"layers": [{"edges": [[0, 0, 0.5]], "model": {"kind": "ic"}}]}
    r = client.post("/multiplexes", json={"multiplex": bad})
    assert r.status_code == 422
    assert "self-loop" in r.json()["detail"]

    r = client.post("/multiplexes", json={"multiplex": {}})
    assert r.status_code == 422

    both = {"multiplex": {**TOY, "manifest_path": "x"}}
    assert client.post("/multiplexes", json=both).status_code == 422


def test_generate_inline(client):
    r = client.post(
        "/multiplexes",
        json={
            "multiplex": {
                "generate": {
                    "layers": [{"kind": "ba", "n": 40, "m": 2}] * 2,
                    "models": ["ic", "lt"],
                    "overlap": 6,
                    "seed": 1,
                }
            },
            "include_layers": True,
        },
    )
    body = r.json()
    assert body["overlap_users"] == 6
    assert body["users"] == 6 + 2 * 34
    assert len(body["layers"]) == 2
    assert all(len(layer["edges"]) == 2 * 2 * (40 - 2) for layer in body["layers"])
