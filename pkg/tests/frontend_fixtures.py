"""Generates the JSON fixtures committed under frontend/fixtures/.

The UI package carries no Python, so its tests run against payload
samples captured from a live service instance. This module produces
those samples deterministically; tests/test_frontend_contract.py
regenerates them and fails on any byte of drift, which is how a wire
format change in the service shows up as a frontend contract break
instead of a silent divergence.

Two separate platform instances are driven:

* a small two-argument pipeline walked through both phases, providing
  the task views, the rubric payload, and a dashboard bundle with a
  funnel, stats, coverage, and agreement for one snapshot;
* a single-argument instance used to record validation vectors: one
  HTTP exchange per acceptance or rejection case, tagged with whether
  the rejection is structural (a well-behaved client must predict it)
  or operational (server-side state the client cannot see).

Run directly to refresh the files:

    python3 tests/frontend_fixtures.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from causeway.config import IngestionConfig, ServiceConfig
from causeway.platform import Platform
from causeway.service import create_app

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURE_DIR = REPO_ROOT / "frontend" / "fixtures"

# Files owned by this generator. fuzz_submissions.json is produced by
# the frontend's own dump script and only replayed from Python.
BACKEND_FILES = (
    "rubric.json",
    "phase1_task.json",
    "validity_task.json",
    "score_task.json",
    "dashboard.json",
    "validation_vectors.json",
)

TOPIC = "Ban whaling"
CLAIM = "We should ban whaling"
VECTOR_PREMISE = "Whales are an endangered species"

PIPELINE_CSV = f"""id,topic,claim,premise,stance_label,stance_conf,quality
a1,{TOPIC},{CLAIM},Whale stocks have collapsed in every hunted region,Support,0.97,0.9
a2,{TOPIC},{CLAIM},Commercial fleets routinely underreport their catch,Support,0.95,0.88
"""

VECTOR_CSV = f"""id,topic,claim,premise,stance_label,stance_conf,quality
b1,{TOPIC},{CLAIM},{VECTOR_PREMISE},Support,0.97,0.9
"""

FULL_QUALS = {"acceptance_rate": 0.99, "approved_tasks": 6000, "quiz_score": 0.9}

JUDGES = ("j1", "j2", "j3", "j4", "j5")


def canonical(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _bearer(worker: str) -> dict:
    return {"Authorization": f"Bearer {worker}"}


def _client(root: str, csv_text: str, **overrides) -> TestClient:
    config = ServiceConfig(
        storage_path=str(Path(root) / "causeway.db"),
        synchronous="normal",
        ingestion=IngestionConfig(topics=(TOPIC,)),
        **overrides,
    )
    platform = Platform(config)
    csv_path = Path(root) / "corpus.csv"
    csv_path.write_text(csv_text, encoding="utf-8")
    platform.ingest_corpus(str(csv_path))
    return TestClient(create_app(platform), raise_server_exceptions=False)


def _register(client: TestClient, worker: str) -> None:
    response = client.post("/workers", json={"id": worker, **FULL_QUALS})
    assert response.status_code == 200, response.text


def _post(client: TestClient, url: str, body: dict, worker: str) -> None:
    response = client.post(url, json=body, headers=_bearer(worker))
    assert response.status_code == 200, (url, worker, response.text)


def build_pipeline_fixtures() -> dict[str, object]:
    """Walk two arguments through both phases and capture the payloads
    the UI renders: one task view per form, the rubric, and the
    dashboard bundle for the resulting snapshot."""
    with tempfile.TemporaryDirectory() as root:
        client = _client(root, PIPELINE_CSV)
        for worker in [f"w{i}" for i in range(1, 7)] + list(JUDGES):
            _register(client, worker)
        _post(client, "/admin/phase1/open", {"argument_ids": ["a1", "a2"]}, "w6")

        rubric = client.get("/rubric").json()

        # Captured before any submissions so the queue head is stable.
        view = client.get(
            "/tasks/next", params={"phase": "phase1"}, headers=_bearer("w6")
        ).json()["task"]
        assert view["task_id"] == "p1-a1", view
        phase1_view = view

        chains = (
            ("w1", "illegal catches decline once enforcement funding rises",
             "whaling stops in protected waters"),
            ("w2", "coastal patrols seize unlicensed vessels",
             "fleets abandon the hunting grounds"),
            ("w3", "insurance costs climb for blacklisted ships",
             "operators exit the trade"),
        )
        for worker, implicit, outcome in chains:
            _post(client, "/tasks/p1-a1/phase1", {
                "feasibility": "CanWrite",
                "outcome_text": outcome,
                "implicit_text": implicit,
                "connector_ai": "cause",
                "connector_io": "cause",
                "sanity_confirmed": True,
            }, worker)
        _post(client, "/tasks/p1-a1/phase1",
              {"feasibility": "CannotWrite", "outcome_text": "the ban passes anyway"}, "w4")
        _post(client, "/tasks/p1-a1/phase1",
              {"feasibility": "Unsure", "outcome_text": "enforcement budgets stay flat"}, "w5")
        for worker in ("w1", "w2", "w3", "w4", "w5"):
            _post(client, "/tasks/p1-a2/phase1",
                  {"feasibility": "CannotWrite", "outcome_text": "catch reports never improve"},
                  worker)

        _post(client, "/admin/phase1/aggregate", {}, "w6")
        _post(client, "/admin/phase2/open", {}, "w6")

        view = client.get(
            "/tasks/next", params={"phase": "phase2"}, headers=_bearer("j1")
        ).json()["task"]
        assert view["task_id"] == "v-a1-c001", view
        validity_view = view

        votes = {
            "a1-c001": (True, True, True, True, True),
            "a1-c002": (True, True, True, False, False),
            "a1-c003": (False, False, False, False, False),
        }
        for chain_id, answers in votes.items():
            for judge, answer in zip(JUDGES, answers):
                _post(client, f"/tasks/v-{chain_id}/validity",
                      {"outcome_valid": answer}, judge)
        _post(client, "/admin/phase2/aggregate", {"kind": "validity"}, "w6")

        view = client.get(
            "/tasks/next", params={"phase": "phase2"}, headers=_bearer("j1")
        ).json()["task"]
        assert view["task_id"] == "s-a1-c001", view
        score_view = view

        scores = {"a1-c001": (5, 4, 4, 3, 2), "a1-c002": (1, 2, 2, 4, 5)}
        for chain_id, values in scores.items():
            for judge, value in zip(JUDGES, values):
                _post(client, f"/tasks/s-{chain_id}/score", {"score": value}, judge)
        _post(client, "/admin/phase2/aggregate", {"kind": "score"}, "w6")

        snapshot = client.post("/admin/snapshots").json()["id"]
        dashboard = {
            "snapshot_id": snapshot,
            "funnel": client.post(f"/admin/snapshots/{snapshot}/funnel").json(),
            "stats": client.get(f"/admin/snapshots/{snapshot}/reports/stats").json(),
            "coverage": client.get(f"/admin/snapshots/{snapshot}/reports/coverage").json(),
            "agreement": client.get(f"/admin/snapshots/{snapshot}/reports/agreement").json(),
        }
        return {
            "rubric.json": rubric,
            "phase1_task.json": phase1_view,
            "validity_task.json": validity_view,
            "score_task.json": score_view,
            "dashboard.json": dashboard,
        }


def _chain_payload(**overrides) -> dict:
    """A structurally sound CanWrite submission; vectors override one
    field each so exactly the named flaw is under test."""
    payload = {
        "feasibility": "CanWrite",
        "outcome_text": "harpoon fleets stay in port",
        "implicit_text": "quota inspectors gain real authority",
        "connector_ai": "cause",
        "connector_io": "cause",
        "sanity_confirmed": True,
    }
    payload.update(overrides)
    return payload


# (name, worker, payload, structural, expected status)
PHASE1_VECTORS = (
    ("accept_full_chain", "v01", _chain_payload(), True, 200),
    ("accept_cannot_write", "v02",
     {"feasibility": "CannotWrite", "outcome_text": "the ban passes with no teeth"},
     True, 200),
    ("accept_unsure", "v03",
     {"feasibility": "Unsure", "outcome_text": "nothing changes at the docks"},
     True, 200),
    ("accept_connector_spelling", "v04", _chain_payload(
        outcome_text="whale numbers rebound within a decade",
        implicit_text="fishing fleets switch to other species",
        connector_ai=" CAUSE ", connector_io="Suppress",
    ), True, 200),
    # The outcome may restate the stance; only the supporting statement
    # is off limits.
    ("accept_outcome_echoes_stance", "v05", _chain_payload(
        outcome_text=CLAIM,
        implicit_text="port inspections get tighter under a ban",
    ), True, 200),
    ("reject_blank_outcome", "v06",
     {"feasibility": "CannotWrite", "outcome_text": "   "}, True, 422),
    ("reject_unknown_feasibility", "v07",
     {"feasibility": "Maybe", "outcome_text": "the vote splits"}, True, 422),
    ("reject_missing_implicit", "v08",
     _chain_payload(outcome_text="fleet owners sue the ministry", implicit_text=None),
     True, 422),
    ("reject_missing_connector", "v09",
     _chain_payload(outcome_text="subsidies dry up", connector_io=None), True, 422),
    ("reject_unconfirmed_sanity", "v10",
     _chain_payload(outcome_text="museums lose specimen funding", sanity_confirmed=False),
     True, 422),
    ("reject_chain_without_canwrite", "v11",
     {"feasibility": "CannotWrite", "outcome_text": "the ban passes anyway",
      "implicit_text": "lobbyists give up"}, True, 422),
    ("reject_unknown_connector", "v12",
     _chain_payload(outcome_text="processing plants close", connector_ai="leads to"),
     True, 422),
    ("reject_implicit_restates_support", "v13",
     _chain_payload(outcome_text="tour operators flourish",
                    implicit_text="whales are an ENDANGERED species."), True, 422),
    ("reject_implicit_restates_stance", "v14",
     _chain_payload(outcome_text="imports of whale meat end",
                    implicit_text="We should ban whaling!"), True, 422),
    ("reject_outcome_restates_support", "v15",
     _chain_payload(outcome_text=VECTOR_PREMISE,
                    implicit_text="sanctuary patrols expand"), True, 422),
    ("reject_blank_implicit", "v16",
     _chain_payload(outcome_text="canneries retool for fish", implicit_text="   "),
     True, 422),
    # Operational rejections: the payloads are well formed, the server
    # refuses for reasons a thin client cannot know in advance.
    ("operational_unregistered_worker", "ghost",
     {"feasibility": "CannotWrite", "outcome_text": "the market collapses"}, False, 403),
    ("operational_duplicate_submission", "v01",
     {"feasibility": "Unsure", "outcome_text": "a second answer from the same worker"},
     False, 409),
)

VALIDITY_VECTORS = (
    ("accept_bool_true", "vj1", {"outcome_valid": True}, True, 200),
    ("accept_bool_false", "vj2", {"outcome_valid": False}, True, 200),
    ("accept_string_yes", "vj3", {"outcome_valid": "Yes"}, True, 200),
    ("accept_string_no", "vj4", {"outcome_valid": "no"}, True, 200),
    ("reject_free_text", "vj5", {"outcome_valid": "maybe"}, True, 422),
    ("accept_fifth_vote", "vj5", {"outcome_valid": True}, True, 200),
    ("operational_phase1_author", "v01", {"outcome_valid": True}, False, 403),
)

SCORE_VECTORS = (
    ("accept_mid_score", "vj1", {"score": 3}, True, 200),
    ("accept_top_score", "vj2", {"score": 5}, True, 200),
    ("reject_zero", "vj3", {"score": 0}, True, 422),
    ("reject_above_range", "vj3", {"score": 6}, True, 422),
    # Rejected by the request model, so the body carries no error code.
    ("reject_fractional", "vj3", {"score": 2.5}, True, 422),
    ("accept_after_rejections", "vj3", {"score": 4}, True, 200),
    ("operational_unassigned_scorer", "vj9", {"score": 2}, False, 403),
)


def build_validation_vectors() -> dict:
    """Replay every vector against a live instance and record the
    verdicts. Structural vectors are the mirror-validation contract:
    the client must reach the same accept/reject answer offline."""
    with tempfile.TemporaryDirectory() as root:
        client = _client(root, VECTOR_CSV, task_capacity=200)
        for i in range(1, 17):
            _register(client, f"v{i:02d}")
        for judge in ("vj1", "vj2", "vj3", "vj4", "vj5", "vj9"):
            _register(client, judge)
        _post(client, "/admin/phase1/open", {"argument_ids": ["b1"]}, "v01")

        sections: dict[str, list] = {"phase1": [], "validity": [], "score": []}

        def run(section: str, url: str, vectors) -> None:
            for name, worker, payload, structural, want in vectors:
                response = client.post(url, json=payload, headers=_bearer(worker))
                assert response.status_code == want, (name, want, response.text)
                code = None if want == 200 else response.json().get("error")
                sections[section].append({
                    "name": name,
                    "worker": worker,
                    "payload": payload,
                    "structural": structural,
                    "expect": {"accepted": want == 200, "status": want, "code": code},
                })

        run("phase1", "/tasks/p1-b1/phase1", PHASE1_VECTORS)
        # Accepted answers above: 3 CanWrite, 1 CannotWrite, 1 Unsure,
        # a Keep verdict, so the first chain's validity task opens.
        _post(client, "/admin/phase1/aggregate", {}, "v01")
        _post(client, "/admin/phase2/open", {}, "v01")
        run("validity", "/tasks/v-b1-c001/validity", VALIDITY_VECTORS)
        # Votes land 3 yes / 2 no, so aggregation opens the score task.
        _post(client, "/admin/phase2/aggregate", {"kind": "validity"}, "v01")
        run("score", "/tasks/s-b1-c001/score", SCORE_VECTORS)

        return {
            "argument": {
                "stance_text": CLAIM,
                "supporting_statement": VECTOR_PREMISE,
                "action_text": "Banning whaling",
            },
            "phase1": sections["phase1"],
            "validity": sections["validity"],
            "score": sections["score"],
        }


def build_fixtures() -> dict[str, str]:
    """Every generator-owned fixture as canonical JSON text, keyed by
    file name."""
    files = {name: canonical(obj) for name, obj in build_pipeline_fixtures().items()}
    files["validation_vectors.json"] = canonical(build_validation_vectors())
    assert set(files) == set(BACKEND_FILES)
    return files


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(build_fixtures().items()):
        (FIXTURE_DIR / name).write_text(text, encoding="utf-8")
        print(f"wrote frontend/fixtures/{name}")


if __name__ == "__main__":
    main()
