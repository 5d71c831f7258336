"""The HTTP surface a worker client or UI talks to.

The same flow as the other demos, but over the FastAPI app: register a
worker, pull the next task from the queue, submit a response with an
idempotency token, and read the rubric the way the annotation UI does.
Workers authenticate with a bearer token carrying their id.

Uses the in-process test client, so it needs the `test` extra
(httpx). A real deployment serves the identical app with
`causeway serve --host 0.0.0.0 --port 8400`.

Run: python3 demos/05_http_service.py
"""

import io
import json
import tempfile

from fastapi.testclient import TestClient

from causeway import Platform, parse_config
from causeway.service import create_app

CORPUS = """\
id,topic,claim,premise,stance_label,stance_conf,quality
a1,Ban whaling,We should ban whaling,Whales are an endangered species.,Support,0.9,0.8
"""


def auth(worker_id: str) -> dict[str, str]:
    return {"Authorization": f"Bearer {worker_id}"}


def main() -> None:
    with tempfile.TemporaryDirectory() as root:
        config = parse_config({
            "storage_path": f"{root}/causeway.db",
            "ingestion": {"topics": ["Ban whaling"]},
        })
        platform = Platform(config)
        try:
            platform.ingest_corpus(io.StringIO(CORPUS))
            platform.open_phase1_tasks(["a1"])
            client = TestClient(create_app(platform), raise_server_exceptions=False)

            print(f"GET /health -> {client.get('/health').json()}")

            registered = client.post("/workers", json={
                "id": "w1", "acceptance_rate": 0.99,
                "approved_tasks": 6000, "quiz_score": 0.9,
            })
            print(f"POST /workers -> allowed phases {registered.json()['phases_allowed']}")

            task = client.get("/tasks/next?phase=phase1", headers=auth("w1")).json()["task"]
            print("\nGET /tasks/next, the worker-facing view:")
            print(json.dumps(task, indent=2))

            body = {
                "feasibility": "CanWrite",
                "outcome_text": "the survival of endangered whales",
                "implicit_text": "whale stocks recover once hunting stops",
                "connector_ai": "cause",
                "connector_io": "cause",
                "sanity_confirmed": True,
                "client_token": "demo-w1-a1",
            }
            first = client.post(f"/tasks/{task['task_id']}/phase1", json=body, headers=auth("w1"))
            print(f"\nPOST phase1 -> {first.status_code} {first.json()}")

            # Same client_token: the retry returns the original receipt
            # instead of double-writing.
            retry = client.post(f"/tasks/{task['task_id']}/phase1", json=body, headers=auth("w1"))
            print(f"Retry with same token -> {retry.status_code}, identical: {retry.json() == first.json()}")

            rubric = client.get("/rubric").json()["rubric"]
            print("\nGET /rubric, shown verbatim in the scoring UI:")
            for grade in sorted(rubric):
                print(f"  {grade}: {rubric[grade]}")
        finally:
            platform.close()


if __name__ == "__main__":
    main()
