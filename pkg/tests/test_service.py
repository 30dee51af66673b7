"""HTTP API: project upload, match sessions, decisions, merge, aggregate."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from typematch.service import create_app

from conftest import FIXTURES_DIR, RECONCILIATION_FIXTURE

PROVIDER_SPEC = f"fixture:{RECONCILIATION_FIXTURE}"


@pytest.fixture
def data_dir(tmp_path: Path) -> Path:
    return tmp_path / "data"


@pytest.fixture
def client(data_dir: Path) -> TestClient:
    app = create_app(data_dir)
    return TestClient(app)


def upload(client: TestClient, csv_name: str) -> str:
    body = (FIXTURES_DIR / csv_name).read_bytes()
    resp = client.post("/projects", content=body, params={"name": csv_name})
    assert resp.status_code == 201, resp.text
    return resp.json()["project"]


def make_session(client: TestClient, config: dict | None = None) -> dict:
    source = upload(client, "noisy_source.csv")
    target = upload(client, "noisy_target.csv")
    payload = {"source": source, "target": target}
    payload["config"] = {"provider": PROVIDER_SPEC, **(config or {})}
    resp = client.post("/sessions", json=payload)
    assert resp.status_code == 201, resp.text
    return resp.json()


# ---------------------------------------------------------------------------
# projects


def test_upload_and_fetch_project(client: TestClient) -> None:
    project_id = upload(client, "noisy_source.csv")
    resp = client.get(f"/projects/{project_id}")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["headers"] == ["Airport Code", None, "Organization", "Cost"]
    assert doc["kinds"] == ["text", "text", "text", "numeric"]
    assert len(doc["rows"]) == 5


def test_upload_without_header_row(client: TestClient) -> None:
    resp = client.post(
        "/projects", content=b"1,2\n3,4\n", params={"has_header": "false"}
    )
    assert resp.status_code == 201
    assert resp.json()["headers"] == [None, None]


def test_upload_rejects_bad_csv(client: TestClient) -> None:
    resp = client.post("/projects", content=b'h\n"a" x\n')
    assert resp.status_code == 400
    assert "error" in resp.json()


def test_upload_rejects_empty_body(client: TestClient) -> None:
    assert client.post("/projects", content=b"").status_code == 400


def test_unknown_project_is_404(client: TestClient) -> None:
    assert client.get("/projects/000000000000").status_code == 404
    assert client.get("/projects/not-an-id").status_code == 404


def test_project_csv_round_trip(client: TestClient) -> None:
    body = (FIXTURES_DIR / "noisy_source.csv").read_bytes()
    project_id = upload(client, "noisy_source.csv")
    resp = client.get(f"/projects/{project_id}/csv")
    assert resp.status_code == 200
    assert resp.content == body


def test_project_listing(client: TestClient) -> None:
    project_id = upload(client, "noisy_source.csv")
    listed = client.get("/projects").json()["projects"]
    assert [p["project"] for p in listed] == [project_id]
    assert listed[0]["rows"] == 5


# ---------------------------------------------------------------------------
# sessions


def test_create_session_noisy_scenario(client: TestClient) -> None:
    view = make_session(client)
    assert {(p["source"], p["target"]) for p in view["pairs"]} == {
        (0, 0),
        (1, 1),
        (3, 3),
    }
    assert all(p["status"] == "pending" for p in view["pairs"])
    combined = [p["combined"] for p in view["pairs"]]
    assert combined == sorted(combined, reverse=True)
    # Cost matches Cost perfectly and leads the list
    assert view["pairs"][0]["source"] == 3
    assert view["pairs"][0]["combined"] == pytest.approx(1.0)


def test_session_config_controls_matchers(client: TestClient) -> None:
    view = make_session(client, {"matchers": ["name", "cosine", "pearson"]})
    assert {(p["source"], p["target"]) for p in view["pairs"]} == {
        (0, 0),
        (1, 1),
        (2, 2),
        (3, 3),
    }


def test_session_unknown_project_is_404(client: TestClient) -> None:
    resp = client.post(
        "/sessions", json={"source": "000000000000", "target": "000000000000"}
    )
    assert resp.status_code == 404


def test_session_bad_matcher_is_400(client: TestClient) -> None:
    source = upload(client, "noisy_source.csv")
    target = upload(client, "noisy_target.csv")
    resp = client.post(
        "/sessions",
        json={
            "source": source,
            "target": target,
            "config": {"matchers": ["soundex"], "provider": PROVIDER_SPEC},
        },
    )
    assert resp.status_code == 400


def test_session_type_matchers_need_provider(client: TestClient) -> None:
    source = upload(client, "noisy_source.csv")
    target = upload(client, "noisy_target.csv")
    resp = client.post("/sessions", json={"source": source, "target": target})
    assert resp.status_code == 400
    assert "provider" in resp.json()["error"]


def test_session_unreachable_provider_is_502(client: TestClient) -> None:
    source = upload(client, "noisy_source.csv")
    target = upload(client, "noisy_target.csv")
    resp = client.post(
        "/sessions",
        json={
            "source": source,
            "target": target,
            "config": {"provider": "http://127.0.0.1:1"},
        },
    )
    assert resp.status_code == 502


def test_session_malformed_body_is_400(client: TestClient) -> None:
    resp = client.post(
        "/sessions", content=b"not json", headers={"Content-Type": "application/json"}
    )
    assert resp.status_code == 400


def test_get_unknown_session_is_404(client: TestClient) -> None:
    assert client.get("/sessions/000000000000").status_code == 404


def test_matches_payload_is_reproducible(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    first = client.get(f"/sessions/{session_id}/matches")
    second = client.get(f"/sessions/{session_id}/matches")
    assert first.status_code == 200
    assert first.content == second.content
    doc = json.loads(first.content)
    assert sorted(map(tuple, doc["mapping"])) == [(0, 0), (1, 1), (3, 3)]


# ---------------------------------------------------------------------------
# decisions


def test_decision_lifecycle(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]

    resp = client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 3], "decision": "accept"},
    )
    assert resp.status_code == 200
    by_pair = {(p["source"], p["target"]): p for p in resp.json()["pairs"]}
    assert by_pair[(3, 3)]["status"] == "accepted"

    resp = client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [0, 0], "decision": "reject"},
    )
    by_pair = {(p["source"], p["target"]): p for p in resp.json()["pairs"]}
    assert by_pair[(0, 0)]["status"] == "rejected"

    resp = client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [0, 0], "decision": "reset"},
    )
    by_pair = {(p["source"], p["target"]): p for p in resp.json()["pairs"]}
    assert by_pair[(0, 0)]["status"] == "pending"


def test_decision_edit_retargets_pair(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    resp = client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 3], "decision": "edit", "target": 2},
    )
    assert resp.status_code == 200
    by_pair = {(p["source"], p["target"]): p for p in resp.json()["pairs"]}
    assert by_pair[(3, 3)]["status"] == "edited"
    assert by_pair[(3, 3)]["edited_target"] == 2


def test_decision_user_added_pair(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    resp = client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [2, 1], "decision": "accept"},
    )
    assert resp.status_code == 200
    added = [p for p in resp.json()["pairs"] if p["added"]]
    assert [(p["source"], p["target"]) for p in added] == [(2, 1)]
    assert added[0]["status"] == "accepted"
    assert added[0]["combined"] is None


def test_decision_invalid_positions_are_400(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    for pair in ([9, 0], [0, 9], [0], "xy", [0, "1"]):
        resp = client.post(
            f"/sessions/{session_id}/decisions",
            json={"pair": pair, "decision": "accept"},
        )
        assert resp.status_code == 400


def test_decision_unknown_kind_is_400(client: TestClient) -> None:
    view = make_session(client)
    resp = client.post(
        f"/sessions/{view['session']}/decisions",
        json={"pair": [0, 0], "decision": "maybe"},
    )
    assert resp.status_code == 400


def test_decision_edit_requires_valid_target(client: TestClient) -> None:
    view = make_session(client)
    resp = client.post(
        f"/sessions/{view['session']}/decisions",
        json={"pair": [0, 0], "decision": "edit", "target": 99},
    )
    assert resp.status_code == 400


# ---------------------------------------------------------------------------
# merge and aggregate over the service


def accept_all(client: TestClient, view: dict) -> None:
    for pair in view["pairs"]:
        resp = client.post(
            f"/sessions/{view['session']}/decisions",
            json={"pair": [pair["source"], pair["target"]], "decision": "accept"},
        )
        assert resp.status_code == 200


def test_merge_requires_accepted_pairs(client: TestClient) -> None:
    view = make_session(client)
    resp = client.post(f"/sessions/{view['session']}/merge")
    assert resp.status_code == 400


def test_merge_and_aggregate_flow(client: TestClient) -> None:
    view = make_session(client, {"matchers": ["name", "cosine", "pearson"]})
    accept_all(client, view)
    resp = client.post(f"/sessions/{view['session']}/merge")
    assert resp.status_code == 201
    merged_id = resp.json()["project"]

    merged = client.get(f"/projects/{merged_id}").json()
    assert len(merged["rows"]) == 10
    assert len(merged["headers"]) == 4

    resp = client.get(
        f"/projects/{merged_id}/aggregate", params={"x": 2, "y": 3, "fn": "sum"}
    )
    assert resp.status_code == 200
    series = resp.json()["series"]
    assert len(series) == 10  # each organization appears once per table
    assert {"key", "value"} == set(series[0])

    # the merge is recorded on the session
    session = client.get(f"/sessions/{view['session']}").json()
    assert session["merged_project"] == merged_id


def test_merge_with_edited_pair(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 3], "decision": "edit", "target": 2},
    )
    resp = client.post(f"/sessions/{session_id}/merge")
    assert resp.status_code == 201
    merged = client.get(f"/projects/{resp.json()['project']}").json()
    # Cost merged under the edited target column OR_Idx
    cost_column = [row[3] for row in merged["rows"]]
    assert cost_column[:5] == ["123.2", "232.12", "321.7", "354.64", "243.8"]
    assert cost_column[5:] == ["MS", "Yahoo", "Samsung", "GOOG", "HP"]


def test_merge_conflicting_acceptances_are_400(client: TestClient) -> None:
    view = make_session(client)
    session_id = view["session"]
    client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 3], "decision": "accept"},
    )
    client.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 2], "decision": "accept"},
    )
    resp = client.post(f"/sessions/{session_id}/merge")
    assert resp.status_code == 400


def test_aggregate_validates_parameters(client: TestClient) -> None:
    project_id = upload(client, "noisy_source.csv")
    base = f"/projects/{project_id}/aggregate"
    assert client.get(base, params={"x": 2, "fn": "sum"}).status_code == 400
    assert client.get(base, params={"x": 2, "y": 3}).status_code == 400
    assert client.get(base, params={"x": 2, "y": 3, "fn": "median"}).status_code == 400
    assert client.get(base, params={"x": "a", "y": 3, "fn": "sum"}).status_code == 400
    assert client.get(base, params={"x": 2, "y": 1, "fn": "sum"}).status_code == 400


# ---------------------------------------------------------------------------
# labels


def test_labels_endpoint(client: TestClient) -> None:
    project_id = upload(client, "clean_target.csv")
    resp = client.get(
        f"/projects/{project_id}/labels",
        params={"column": 1, "provider": PROVIDER_SPEC},
    )
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["suggestions"][0]["label"] == "Organization"
    assert {"label", "type_id", "wilson", "n"} == set(doc["suggestions"][0])


def test_labels_need_a_provider(client: TestClient) -> None:
    project_id = upload(client, "clean_target.csv")
    resp = client.get(f"/projects/{project_id}/labels", params={"column": 1})
    assert resp.status_code == 400


def test_labels_default_provider(data_dir: Path) -> None:
    from typematch.reconcile import parse_provider_spec

    app = create_app(data_dir, default_provider=parse_provider_spec(PROVIDER_SPEC))
    with TestClient(app) as client:
        project_id = upload(client, "clean_target.csv")
        resp = client.get(f"/projects/{project_id}/labels", params={"column": 1})
        assert resp.status_code == 200


# ---------------------------------------------------------------------------
# persistence across restarts


def test_restart_replays_sessions_identically(data_dir: Path) -> None:
    first = TestClient(create_app(data_dir))
    view = make_session(first)
    session_id = view["session"]
    first.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [3, 3], "decision": "accept"},
    )
    first.post(
        f"/sessions/{session_id}/decisions",
        json={"pair": [0, 0], "decision": "reject"},
    )
    before_view = first.get(f"/sessions/{session_id}").content
    before_matches = first.get(f"/sessions/{session_id}/matches").content

    # a fresh app over the same directory reconstructs the same state
    second = TestClient(create_app(data_dir))
    assert second.get(f"/sessions/{session_id}").content == before_view
    assert second.get(f"/sessions/{session_id}/matches").content == before_matches
    assert session_id in second.get("/sessions").json()["sessions"]


# ---------------------------------------------------------------------------
# cross-origin access for the browser UI


def test_cors_preflight_allows_any_origin(client: TestClient) -> None:
    resp = client.options(
        "/projects",
        headers={
            "Origin": "http://localhost:5173",
            "Access-Control-Request-Method": "POST",
        },
    )
    assert resp.status_code == 200
    assert resp.headers["access-control-allow-origin"] == "*"
