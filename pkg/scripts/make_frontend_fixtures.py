#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the engine.

Captures, for one linear-projection job: the exact JSON the job endpoint
serves, and the embedding file the CLI writes for the same job.  The
frontend integration test replays the job against a live server and must
reproduce both byte-for-byte.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from click.testing import CliRunner
from fastapi.testclient import TestClient

from debiaskit.cli import main
from debiaskit.service import create_app

FIXTURES = ROOT / "frontend" / "test" / "fixtures"

JOB = {
    "method": "lp",
    "subspace_method": "two_means",
    "seeds_f": ["woman", "she"],
    "seeds_m": ["man", "he"],
    "evaluation": ["receptionist", "nurse", "scientist", "mathematician", "banker", "engineer"],
    "label": "gender",
    "metrics": True,
}


def main_():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "lp_job.json").write_text(json.dumps(JOB, indent=2) + "\n")

    client = TestClient(create_app())
    sid = client.post("/sessions", json={"embedding": "glove50-default"}).json()["session_id"]
    resp = client.post(f"/sessions/{sid}/jobs", json=JOB)
    assert resp.status_code == 201, resp.text
    (FIXTURES / "lp_trace.json").write_text(json.dumps(resp.json(), sort_keys=True) + "\n")
    export = client.get(f"/sessions/{sid}/export", params={"format": "glove_text"})
    (FIXTURES / "lp_export_http.txt").write_bytes(export.content)

    runner = CliRunner()
    embedding = ROOT / "src/debiaskit/data/default_embedding_50d.txt"
    out = FIXTURES / "lp_export_cli.txt"
    result = runner.invoke(main, [
        "debias", "--embedding", str(embedding), "--method", "lp",
        "--subspace", "two-means",
        "--seeds-f", ",".join(JOB["seeds_f"]), "--seeds-m", ",".join(JOB["seeds_m"]),
        "--eval", ",".join(JOB["evaluation"]),
        "--label", "gender",
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert out.read_bytes() == (FIXTURES / "lp_export_http.txt").read_bytes(), \
        "CLI and HTTP exports diverged"
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main_()
