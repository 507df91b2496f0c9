"""
Tests for the chordlab HTTP API
"""


def test_root_endpoint(client):
    response = client.get("/")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "active"
    assert data["endpoints"]["enumerate"] == "/enumerate"


def test_health_endpoint(client):
    response = client.get("/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["max_sites"] == {"oriented": 14, "nonoriented": 12}


def test_diagram_type_of_the_torus(client):
    response = client.post("/diagram/type", json={"literal": "backbones=[CCCC] chords=[(0.0-0.2,u),(0.1-0.3,u)]"})
    assert response.status_code == 200
    data = response.json()
    assert data["type"]["genus"] == 1 and data["type"]["k"] == 2 and data["type"]["n"] == 1
    assert data["boundaries"] == [{"length": 5, "marks": [0, 0, 0, 0, 0]}]


def test_diagram_type_of_the_mobius_band(client):
    response = client.post("/diagram/type", json={"literal": "backbones=[CC] chords=[(0.0-0.1,t)]"})
    data = response.json()
    assert data["type"]["mode"] == "nonoriented"
    assert data["type"]["crosscaps"] == 1 and data["type"]["genus"] is None


def test_diagram_type_errors(client):
    assert client.post("/diagram/type", json={}).status_code == 422
    response = client.post("/diagram/type", json={"literal": "backbones=[CC] chords=[(0.0-0.0,u)]"})
    assert response.status_code == 422
    assert response.json()["status"] == "error"


def test_enumerate_endpoint(client):
    response = client.post("/enumerate", json={"backbones": [6], "chords": 3})
    assert response.status_code == 200
    census = response.json()["census"]
    by_genus = {}
    for entry in census["entries"]:
        by_genus[entry["genus"]] = by_genus.get(entry["genus"], 0) + int(entry["count"])
    assert by_genus == {0: 5, 1: 10}


def test_enumerate_rejects_bad_requests(client):
    assert client.post("/enumerate", json={"backbones": [2], "mode": "twisted"}).status_code == 422
    assert client.post("/enumerate", json={"backbones": [10, 10]}).status_code == 422


def test_evolve_endpoint(client):
    response = client.post("/evolve", json={"model": "point", "orientation": "nonoriented", "ymax": 1, "max_sites": 2})
    assert response.status_code == 200
    series = response.json()["series"]
    assert series["model"] == "point" and series["mode"] == "nonoriented"
    assert series["terms"]


def test_check_lemmas_endpoint(client):
    response = client.post("/check-lemmas", json={"which": "length-oriented", "n": 3, "trials": 2})
    assert response.status_code == 200
    report = response.json()["report"]
    assert report["passed"]
    assert report["reports"][0]["n"] == 3


def test_evolve_rejects_an_unbounded_ymax(client):
    response = client.post("/evolve", json={"model": "lp", "ymax": 1000000})
    assert response.status_code == 422
    assert "--ymax" in response.json()["message"]
