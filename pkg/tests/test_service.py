import pytest
from fastapi.testclient import TestClient

from debiaskit import export_embedding, load_embedding
from debiaskit.service import create_app
from conftest import random_snapshot


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _make_session(client, name="glove50-default"):
    resp = client.post("/sessions", json={"embedding": name})
    assert resp.status_code == 201
    return resp.json()["session_id"]


LP_JOB = {
    "method": "lp",
    "subspace_method": "two_means",
    "seeds_f": ["woman", "she"],
    "seeds_m": ["man", "he"],
    "evaluation": ["receptionist", "nurse", "scientist", "mathematician"],
    "label": "gender",
}


def test_create_session_with_registered_name(client):
    resp = client.post("/sessions", json={"embedding": "glove50-default"})
    assert resp.status_code == 201
    body = resp.json()
    assert body["vocab_size"] > 0 and body["dim"] == 50


def test_create_session_unknown_name_404(client):
    resp = client.post("/sessions", json={"embedding": "nonexistent"})
    assert resp.status_code == 404


def test_create_session_upload_desk_scale(client, rng):
    snap = random_snapshot(rng, 1000, 50)
    content = export_embedding(snap, "glove_text").decode()
    resp = client.post(
        "/sessions", json={"upload": {"format": "glove_text", "content": content}}
    )
    assert resp.status_code == 201
    sid = resp.json()["session_id"]
    info = client.get(f"/sessions/{sid}").json()
    assert info["vocab_size"] == 1000


def test_create_session_malformed_upload_400(client):
    resp = client.post(
        "/sessions", json={"upload": {"format": "glove_text", "content": "a 1 2\na 1 2\n"}}
    )
    assert resp.status_code == 400
    resp = client.post(
        "/sessions", json={"upload": {"format": "nope", "content": "a 1 2\n"}}
    )
    assert resp.status_code == 400
    resp = client.post("/sessions", json={})
    assert resp.status_code == 400


def test_subspace_summary(client):
    sid = _make_session(client)
    resp = client.post(
        f"/sessions/{sid}/subspace",
        json={"method": "two_means", "seeds_f": ["she", "woman"],
              "seeds_m": ["he", "man"], "label": "gender", "k": 5},
    )
    assert resp.status_code == 200
    body = resp.json()
    assert body["method"] == "two_means"
    assert len(body["positive_neighbors"]) == 5
    pos = [t for t, _ in body["positive_neighbors"]]
    neg = [t for t, _ in body["negative_neighbors"]]
    assert "she" in pos or "woman" in pos or "her" in pos
    assert "he" in neg or "man" in neg or "his" in neg


def test_subspace_missing_tokens_422(client):
    sid = _make_session(client)
    resp = client.post(
        f"/sessions/{sid}/subspace",
        json={"method": "two_means", "seeds_f": ["she", "qqq1", "qqq2"],
              "seeds_m": ["he"]},
    )
    assert resp.status_code == 422
    assert resp.json()["detail"]["missing"] == ["qqq1", "qqq2"]


def test_job_and_export_roundtrip(client):
    sid = _make_session(client)
    resp = client.post(f"/sessions/{sid}/jobs", json=LP_JOB)
    assert resp.status_code == 201
    trace = resp.json()["trace"]
    assert len(trace["frames"]) == 4
    export = client.get(f"/sessions/{sid}/export", params={"format": "glove_text"})
    assert export.status_code == 200
    assert export.headers["content-type"].startswith("text/plain")
    snap = load_embedding(export.text, "glove_text")
    assert len(snap) > 0


def test_job_invariant_violation_409(client):
    sid = _make_session(client)
    job = dict(LP_JOB, method="hd")  # missing equalize
    resp = client.post(f"/sessions/{sid}/jobs", json=job)
    assert resp.status_code == 409


def test_job_missing_tokens_422_with_full_list(client):
    sid = _make_session(client)
    job = dict(LP_JOB, evaluation=["nurse", "zzz1", "zzz2"])
    resp = client.post(f"/sessions/{sid}/jobs", json=job)
    assert resp.status_code == 422
    assert resp.json()["detail"]["missing"] == ["zzz1", "zzz2"]


def test_unknown_session_404(client):
    assert client.get("/sessions/snope").status_code == 404
    assert client.post("/sessions/snope/jobs", json=LP_JOB).status_code == 404


def test_neighbors_before_and_after(client):
    sid = _make_session(client)
    client.post(f"/sessions/{sid}/jobs", json=LP_JOB)
    before = client.get(
        f"/sessions/{sid}/neighbors", params={"token": "nurse", "k": 5, "state": "before"}
    ).json()
    after = client.get(
        f"/sessions/{sid}/neighbors", params={"token": "nurse", "k": 5, "state": "after"}
    ).json()
    assert len(before["neighbors"]) == 5 and len(after["neighbors"]) == 5
    assert before["snapshot_id"] != after["snapshot_id"]
    bad = client.get(f"/sessions/{sid}/neighbors", params={"token": "zzz", "k": 3})
    assert bad.status_code == 404


def test_chained_jobs_operate_on_current(client):
    sid = _make_session(client)
    royalty = {
        "method": "lp",
        "subspace_method": "two_means",
        "seeds_f": ["king", "queen"],
        "seeds_m": ["man", "woman"],
        "evaluation": ["obnoxious", "considerate", "plain", "fancy"],
        "label": "royalty",
    }
    r1 = client.post(f"/sessions/{sid}/jobs", json=royalty)
    assert r1.status_code == 201
    first_id = r1.json()["current_snapshot_id"]
    r2 = client.post(f"/sessions/{sid}/jobs", json=LP_JOB)
    assert r2.status_code == 201
    assert r2.json()["trace"]["frames"][0]["snapshot_id"] == first_id


def test_sessions_isolated(client):
    sid1 = _make_session(client)
    sid2 = _make_session(client)
    client.post(f"/sessions/{sid1}/jobs", json=LP_JOB)
    exp1 = client.get(f"/sessions/{sid1}/export").text
    exp2 = client.get(f"/sessions/{sid2}/export").text
    assert exp1 != exp2  # session 2 still at base


def test_reset_restores_base_bitwise(client):
    sid = _make_session(client)
    base_export = client.get(f"/sessions/{sid}/export").content
    client.post(f"/sessions/{sid}/jobs", json=LP_JOB)
    changed = client.get(f"/sessions/{sid}/export").content
    assert changed != base_export
    client.post(f"/sessions/{sid}/reset")
    assert client.get(f"/sessions/{sid}/export").content == base_export


def test_same_job_byte_identical_export(client):
    sid1 = _make_session(client)
    sid2 = _make_session(client)
    client.post(f"/sessions/{sid1}/jobs", json=LP_JOB)
    client.post(f"/sessions/{sid2}/jobs", json=LP_JOB)
    exp1 = client.get(f"/sessions/{sid1}/export").content
    exp2 = client.get(f"/sessions/{sid2}/export").content
    assert exp1 == exp2


def test_job_with_metrics(client):
    sid = _make_session(client)
    job = dict(LP_JOB, metrics=True)
    resp = client.post(f"/sessions/{sid}/jobs", json=job)
    body = resp.json()
    assert body["metrics_before"] is not None
    assert body["metrics_after"] is not None
    assert abs(body["metrics_after"]["weat"]) < abs(body["metrics_before"]["weat"])


def test_presets_listing(client):
    resp = client.get("/presets")
    assert resp.status_code == 200
    names = [p["name"] for p in resp.json()["presets"]]
    assert any("linear projection" in n for n in names)
    assert any("royalty" in n for n in names)


def test_export_unknown_format_400(client):
    sid = _make_session(client)
    assert client.get(f"/sessions/{sid}/export", params={"format": "parquet"}).status_code == 400
