"""HTTP API over the platform.

Worker endpoints cover registration, task fetching, and the three
submission kinds; admin endpoints drive task lifecycle, snapshots, the
funnel, reports, and export. Every rejection carries a machine-readable
code in the body. Submissions are durably persisted before the response
is sent (the workflow commits inside the request).

Worker identity rides a bearer token (the worker id); a worker_id field
in the body works as a fallback for simple clients.
"""

from __future__ import annotations

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .aggregation import AggregationError
from .config import ServiceConfig
from .platform import (
    EXPORT_BUCKET_ALL,
    EXPORT_BUCKET_KEPT,
    Platform,
    PlatformError,
)
from .views import SCORE_RUBRIC
from .workflow import WorkflowError

_STATUS_BY_CODE = {
    "NOT_FOUND": 404,
    "SNAPSHOT_NOT_FOUND": 404,
    "NOT_QUALIFIED": 403,
    "CHAIN_INVALID": 422,
    "EMPTY_VOTES": 422,
    "SCORE_OUT_OF_RANGE": 422,
    "DANGLING_REFERENCE": 422,
    "CAPACITY_EXHAUSTED": 409,
    "DUPLICATE_SUBMISSION": 409,
    "DUPLICATE_TASK": 409,
    "AGGREGATION_INCOMPLETE": 409,
    "MISSING_ACTION_ENTITY": 409,
    "FUNNEL_NOT_RUN": 409,
}


class WorkerRegistration(BaseModel):
    id: str = Field(min_length=1)
    acceptance_rate: float
    approved_tasks: int
    quiz_score: float | None = None


class Phase1Submission(BaseModel):
    worker_id: str | None = None
    outcome_text: str
    feasibility: str
    implicit_text: str | None = None
    connector_ai: str | None = None
    connector_io: str | None = None
    sanity_confirmed: bool = False
    client_token: str | None = None


class ValiditySubmission(BaseModel):
    worker_id: str | None = None
    outcome_valid: bool | str
    client_token: str | None = None


class ScoreSubmission(BaseModel):
    worker_id: str | None = None
    score: int
    client_token: str | None = None


class TaskSelector(BaseModel):
    task_id: str | None = None  # omitted = every eligible task


class Phase1OpenRequest(BaseModel):
    argument_ids: list[str] | None = None  # omitted = all admitted arguments


def create_app(platform: Platform) -> FastAPI:
    app = FastAPI(title="causeway", docs_url=None, redoc_url=None)
    app.state.platform = platform

    @app.exception_handler(WorkflowError)
    async def workflow_error(_req: Request, exc: WorkflowError):
        return _error_response(exc.code, exc.detail)

    @app.exception_handler(PlatformError)
    async def platform_error(_req: Request, exc: PlatformError):
        return _error_response(exc.code, exc.detail)

    @app.exception_handler(AggregationError)
    async def aggregation_error(_req: Request, exc: AggregationError):
        return _error_response(exc.code, str(exc))

    @app.exception_handler(ValueError)
    async def value_error(_req: Request, exc: ValueError):
        return _error_response("INVALID_REQUEST", str(exc), status=422)

    def _error_response(code: str, detail: str, status: int | None = None):
        return JSONResponse(
            status_code=status or _STATUS_BY_CODE.get(code, 400),
            content={"error": code, "detail": detail},
        )

    def bearer_worker(authorization: str | None = Header(default=None)) -> str | None:
        if authorization and authorization.lower().startswith("bearer "):
            return authorization[7:].strip() or None
        return None

    def resolve_worker(token: str | None, body_worker: str | None) -> str:
        worker_id = token or body_worker
        if worker_id is None:
            raise WorkflowError(
                "NOT_QUALIFIED", "no worker identity: send a bearer token or worker_id"
            )
        return worker_id

    # -- health and static content ------------------------------------

    @app.get("/health")
    def health():
        return {"status": "ready"}

    @app.get("/rubric")
    def rubric():
        return {"rubric": {str(k): v for k, v in SCORE_RUBRIC.items()}}

    # -- workers --------------------------------------------------------

    @app.post("/workers")
    def register_worker(body: WorkerRegistration):
        return platform.workflow.register_worker(
            body.id, body.acceptance_rate, body.approved_tasks, body.quiz_score
        )

    @app.get("/workers/{worker_id}")
    def get_worker(worker_id: str):
        return platform.workflow.get_worker(worker_id)

    # -- tasks ----------------------------------------------------------

    @app.get("/tasks/next")
    def next_task(
        phase: str = Query(...),
        token: str | None = Depends(bearer_worker),
        worker_id: str | None = Query(default=None),
    ):
        resolved = resolve_worker(token, worker_id)
        view = platform.next_task_view(resolved, phase)
        return {"task": view}

    @app.post("/tasks/{task_id}/phase1")
    def submit_phase1(
        task_id: str, body: Phase1Submission, token: str | None = Depends(bearer_worker)
    ):
        receipt = platform.workflow.submit_phase1(
            task_id,
            resolve_worker(token, body.worker_id),
            outcome_text=body.outcome_text,
            feasibility=body.feasibility,
            implicit_text=body.implicit_text,
            rel_ai=body.connector_ai,
            rel_io=body.connector_io,
            sanity_confirmed=body.sanity_confirmed,
            client_token=body.client_token,
        )
        return _receipt_body(receipt)

    @app.post("/tasks/{task_id}/validity")
    def submit_validity(
        task_id: str, body: ValiditySubmission, token: str | None = Depends(bearer_worker)
    ):
        answer = body.outcome_valid
        if isinstance(answer, str):
            normalized = answer.strip().lower()
            if normalized not in ("yes", "no"):
                raise WorkflowError("CHAIN_INVALID", f"outcome_valid must be Yes or No, got {answer!r}")
            answer = normalized == "yes"
        receipt = platform.workflow.submit_validity(
            task_id,
            resolve_worker(token, body.worker_id),
            outcome_valid=answer,
            client_token=body.client_token,
        )
        return _receipt_body(receipt)

    @app.post("/tasks/{task_id}/score")
    def submit_score(
        task_id: str, body: ScoreSubmission, token: str | None = Depends(bearer_worker)
    ):
        receipt = platform.workflow.submit_score(
            task_id,
            resolve_worker(token, body.worker_id),
            score=body.score,
            client_token=body.client_token,
        )
        return _receipt_body(receipt)

    def _receipt_body(receipt):
        return {
            "status": "accepted",
            "task_id": receipt.task_id,
            "chain_id": receipt.chain_id,
            "task_state": receipt.task_state,
        }

    # -- admin: lifecycle ------------------------------------------------

    @app.get("/admin/tasks")
    def list_tasks(kind: str | None = None, state: str | None = None):
        return {"tasks": platform.workflow.list_tasks(kind=kind, state=state)}

    @app.post("/admin/phase1/open")
    def open_phase1(body: Phase1OpenRequest):
        return platform.open_phase1_tasks(body.argument_ids)

    @app.post("/admin/phase1/aggregate")
    def aggregate_phase1(body: TaskSelector):
        if body.task_id is not None:
            verdict = platform.workflow.aggregate_phase1(body.task_id)
            return {"aggregated": [{"task": body.task_id, "decision": verdict.decision.value}]}
        return platform.aggregate_pending("phase1")

    @app.post("/admin/phase1/bonuses")
    def grant_bonuses(body: TaskSelector):
        if body.task_id is not None:
            entries = platform.workflow.grant_feasibility_bonuses(body.task_id)
            return {"entries": entries}
        return platform.grant_bonuses_pending()

    @app.post("/admin/phase2/open")
    def open_phase2(body: dict | None = None):
        chain_ids = (body or {}).get("chain_ids")
        if chain_ids is not None:
            created = platform.workflow.open_validity_tasks(chain_ids)
            return {"opened": [task["id"] for task in created]}
        return platform.open_validity_tasks_for_keeps()

    @app.post("/admin/phase2/aggregate")
    def aggregate_phase2(body: dict | None = None):
        kind = (body or {}).get("kind", "validity")
        task_id = (body or {}).get("task_id")
        if task_id is not None:
            aggregate = {
                "validity": platform.workflow.aggregate_validity,
                "score": platform.workflow.aggregate_score,
            }.get(kind)
            if aggregate is None:
                raise ValueError(f"kind must be validity or score, got {kind!r}")
            verdict = aggregate(task_id)
            return {"aggregated": [{"task": task_id, "decision": verdict.decision.value}]}
        return platform.aggregate_pending(kind)

    # -- admin: snapshots, reports, export --------------------------------

    @app.post("/admin/snapshots")
    def create_snapshot():
        return {"id": platform.create_snapshot()}

    @app.get("/admin/snapshots")
    def list_snapshots():
        return {"snapshots": platform.list_snapshots()}

    @app.post("/admin/snapshots/{snapshot_id}/funnel")
    def run_funnel(snapshot_id: str):
        report = platform.run_snapshot_funnel(snapshot_id)
        return {"rows": report.to_rows()}

    @app.get("/admin/snapshots/{snapshot_id}/reports/stats")
    def report_stats(snapshot_id: str):
        return platform.stats_report(snapshot_id)

    @app.get("/admin/snapshots/{snapshot_id}/reports/coverage")
    def report_coverage(snapshot_id: str):
        return platform.coverage_report(snapshot_id)

    @app.get("/admin/snapshots/{snapshot_id}/reports/agreement")
    def report_agreement(snapshot_id: str):
        return platform.agreement_report(snapshot_id)

    @app.get("/admin/snapshots/{snapshot_id}/export")
    def export(snapshot_id: str, bucket: str = EXPORT_BUCKET_KEPT):
        if bucket not in (EXPORT_BUCKET_KEPT, EXPORT_BUCKET_ALL):
            raise ValueError(f"bucket must be 'kept' or 'all', got {bucket!r}")
        return PlainTextResponse(
            platform.export_dataset(snapshot_id, bucket), media_type="text/csv"
        )

    return app


def create_app_from_config(config: ServiceConfig) -> FastAPI:
    return create_app(Platform(config))
