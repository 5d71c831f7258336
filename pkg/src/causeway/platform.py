"""Operator-facing facade: ingest, snapshots, funnel, reports, export.

Everything analytic runs over snapshots, which freeze the mutable
workflow state (arguments, tasks, responses, votes) into an immutable
document. The funnel and all reports derive from the frozen votes, so
re-running them on the same snapshot always reproduces the same
numbers, and exports of the same snapshot are byte-identical.
"""

from __future__ import annotations

import csv
import io
from datetime import datetime, timezone

from . import metrics, views
from .aggregation import (
    BUCKET_KEEP,
    Feasibility,
    FunnelReport,
    run_funnel,
)
from .chains import FLAT_RECORD_FIELDS
from .config import ConfigError, ServiceConfig
from .extraction import DEFAULT_RULES, extract_action
from .ingestion import Argument, FilterPolicy, IngestResult, ingest
from .store import Store, resolve_storage_path
from .workflow import KIND_PHASE1, NOT_FOUND, Workflow, WorkflowError

SNAPSHOT_NOT_FOUND = "SNAPSHOT_NOT_FOUND"
FUNNEL_NOT_RUN = "FUNNEL_NOT_RUN"

EXPORT_BUCKET_KEPT = "kept"
EXPORT_BUCKET_ALL = "all"

EXPORT_FIELDS = FLAT_RECORD_FIELDS + ("bucket", "validity_decision", "score_decision")


class PlatformError(Exception):
    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


class Platform:
    """One deployable unit: a store, a workflow, and the batch surface."""

    def __init__(self, config: ServiceConfig, store: Store | None = None):
        self.config = config
        self.store = store or Store(
            resolve_storage_path(config.storage_path), synchronous=config.synchronous
        )
        self.workflow = Workflow(self.store, config)

    def close(self) -> None:
        self.store.close()

    # -- corpus -------------------------------------------------------

    def filter_policy(self) -> FilterPolicy:
        """Admission policy from config. The topic allowlist must be
        declared before ingestion can run."""
        ing = self.config.ingestion
        if not ing.topics:
            raise ConfigError(
                "ingestion.topics",
                "a non-empty topic allowlist is required before ingesting",
            )
        return FilterPolicy(
            min_quality=ing.min_quality,
            min_stance=ing.min_stance,
            topics=frozenset(ing.topics),
            stance_required=ing.stance_required,
        )

    def ingest_corpus(
        self, source, column_map=None, rules=DEFAULT_RULES, policy: FilterPolicy | None = None
    ) -> IngestResult:
        """Filter a raw corpus and persist admitted arguments with their
        extracted action entities. Arguments whose claim matches no
        extraction rule are stored with action = None and need manual
        entry before a Phase 1 task can open."""
        result = ingest(source, policy or self.filter_policy(), column_map=column_map)
        with self.store.batch() as batch:
            for argument in result.admitted:
                action = extract_action(argument.claim, claim_id=argument.id, rules=rules)
                batch.put(
                    "argument",
                    argument.id,
                    {
                        "id": argument.id,
                        "topic": argument.topic,
                        "claim": argument.claim,
                        "premise": argument.premise,
                        "stance_label": argument.stance_label,
                        "stance_conf": argument.stance_conf,
                        "quality": argument.quality,
                        "action": None
                        if action is None
                        else {
                            "text": action.text,
                            "hand_entered": action.hand_entered,
                            "needs_review": action.needs_review,
                        },
                    },
                )
        return result

    def set_manual_action(self, argument_id: str, text: str) -> dict:
        """Operator override for claims the rule set could not parse."""
        if not text or not text.strip():
            raise ValueError("manual action text must be non-empty")
        with self.store.batch() as batch:
            argument = batch.get("argument", argument_id)
            if argument is None:
                raise WorkflowError(NOT_FOUND, f"unknown argument {argument_id!r}")
            argument["action"] = {
                "text": text.strip(),
                "hand_entered": True,
                "needs_review": False,
            }
            batch.put("argument", argument_id, argument)
            return argument

    def arguments(self) -> list[Argument]:
        return [
            Argument(
                id=doc["id"],
                topic=doc["topic"],
                claim=doc["claim"],
                premise=doc["premise"],
                stance_label=doc["stance_label"],
                stance_conf=doc["stance_conf"],
                quality=doc["quality"],
            )
            for _, doc in self.store.items("argument")
        ]

    # -- worker task views -----------------------------------------------

    def task_view(self, task: dict) -> dict:
        argument = self.store.get("argument", task["argument_id"])
        if task["kind"] == KIND_PHASE1:
            return views.phase1_task_view(task, argument)
        chain = self.store.get("chain", task["chain_id"])
        if task["kind"] == "validity":
            return views.validity_task_view(task, chain, argument)
        return views.score_task_view(task, chain, argument)

    def next_task_view(self, worker_id: str, phase: str) -> dict | None:
        task = self.workflow.next_task(worker_id, phase)
        return None if task is None else self.task_view(task)

    # -- bulk task orchestration ----------------------------------------

    def open_phase1_tasks(self, argument_ids: list[str] | None = None) -> dict:
        """Open Phase 1 tasks for the given arguments (default: all
        admitted). Arguments already holding a task are skipped; those
        with no action entity are reported, not fatal."""
        if argument_ids is None:
            argument_ids = [arg_id for arg_id, _ in self.store.items("argument")]
        opened, skipped, missing_action = [], [], []
        for arg_id in argument_ids:
            if self.store.exists("task", f"p1-{arg_id}"):
                skipped.append(arg_id)
                continue
            try:
                task = self.workflow.open_phase1_task(arg_id)
            except WorkflowError as exc:
                if exc.code == "MISSING_ACTION_ENTITY":
                    missing_action.append(arg_id)
                    continue
                raise
            opened.append(task["id"])
        return {"opened": opened, "skipped": skipped, "missing_action": missing_action}

    def aggregate_pending(self, kind: str) -> dict:
        """Aggregate every task of ``kind`` that has votes but no verdict.

        Tasks with zero responses stay open. Validity Keeps open their
        score tasks as a side effect, so calling this for "validity"
        then "score" advances the whole Phase 2 pipeline.
        """
        aggregate = {
            "phase1": self.workflow.aggregate_phase1,
            "validity": self.workflow.aggregate_validity,
            "score": self.workflow.aggregate_score,
        }.get(kind)
        if aggregate is None:
            raise ValueError(f"kind must be phase1, validity, or score, got {kind!r}")
        done, empty = [], []
        for task_id, task in self.store.items("task"):
            if task["kind"] != kind or task["state"] not in ("open", "full"):
                continue
            if task["n_accepted"] == 0:
                empty.append(task_id)
                continue
            verdict = aggregate(task_id)
            done.append({"task": task_id, "decision": verdict.decision.value})
        return {"aggregated": done, "left_open": empty}

    def chains_on_keep_pairs(self) -> list[str]:
        """Chains eligible for Phase 2: their pair's feasibility verdict
        is Keep. Chains on discarded or doubtful pairs never advance."""
        keep_tasks = set()
        for task_id, verdict in self.store.items("verdict"):
            if verdict["kind"] == KIND_PHASE1 and verdict["decision"] == "Keep":
                keep_tasks.add(task_id)
        return [
            chain_id
            for chain_id, record in self.store.items("chain")
            if record["phase1_task_id"] in keep_tasks
        ]

    def open_validity_tasks_for_keeps(self) -> dict:
        created = self.workflow.open_validity_tasks(self.chains_on_keep_pairs())
        return {"opened": [task["id"] for task in created]}

    def grant_bonuses_pending(self) -> dict:
        """Write bonus ledger entries for every aggregated Phase 1 task
        that has none yet."""
        granted = {}
        for task_id, task in self.store.items("task"):
            if task["kind"] != KIND_PHASE1 or task["state"] not in ("aggregated", "closed"):
                continue
            if self.store.items_prefix("bonus", f"{task_id}/"):
                continue
            entries = self.workflow.grant_feasibility_bonuses(task_id)
            granted[task_id] = sum(e["bonus_cents"] > 0 for e in entries)
        return {"tasks": granted}

    # -- snapshots ----------------------------------------------------

    def create_snapshot(self) -> str:
        """Freeze the live state. The snapshot id is sequential; content
        carries no timestamps so identical states export identically."""
        payload = {
            "arguments": dict(self.store.items("argument")),
            "tasks": dict(self.store.items("task")),
            "p1_responses": dict(self.store.items("p1resp")),
            "chains": dict(self.store.items("chain")),
            "validity_votes": dict(self.store.items("vvote")),
            "score_votes": dict(self.store.items("svote")),
            "verdicts": dict(self.store.items("verdict")),
        }
        with self.store.batch() as batch:
            seq = (batch.get("meta", "snapshot_seq") or 0) + 1
            batch.put("meta", "snapshot_seq", seq)
            snapshot_id = f"snap-{seq:04d}"
            batch.put("snapshot", snapshot_id, {
                "id": snapshot_id,
                "created_at": datetime.now(timezone.utc).isoformat(),
                "payload": payload,
            })
        return snapshot_id

    def get_snapshot(self, snapshot_id: str) -> dict:
        doc = self.store.get("snapshot", snapshot_id)
        if doc is None:
            raise PlatformError(SNAPSHOT_NOT_FOUND, f"unknown snapshot {snapshot_id!r}")
        return doc

    def list_snapshots(self) -> list[dict]:
        return [
            {"id": doc["id"], "created_at": doc["created_at"]}
            for _, doc in self.store.items("snapshot")
        ]

    # -- funnel and reports -------------------------------------------

    def run_snapshot_funnel(self, snapshot_id: str) -> FunnelReport:
        """Aggregate the frozen votes through the full two-phase funnel
        and persist the result next to the snapshot."""
        payload = self.get_snapshot(snapshot_id)["payload"]
        report = run_funnel(
            feasibility_votes=self._feasibility_votes(payload),
            chains_by_pair=self._chains_by_pair(payload),
            validity_votes=self._validity_votes(payload),
            score_votes=self._score_votes(payload),
            feasibility_threshold=self.config.aggregation.feasibility_threshold,
            validity_threshold=self.config.aggregation.validity_threshold,
            score_threshold=self.config.aggregation.score_threshold,
            score_mode=self.config.aggregation.score_mode,
        )
        with self.store.batch() as batch:
            batch.put("funnel", snapshot_id, {
                "rows": report.to_rows(),
                "chain_buckets": report.chain_buckets,
                "chain_validity": {
                    cid: v.decision.value for cid, v in report.chain_validity.items()
                },
                "chain_scores": {
                    cid: v.decision.value for cid, v in report.chain_scores.items()
                },
                "pair_feasibility": {
                    pid: v.decision.value for pid, v in report.pair_feasibility.items()
                },
            })
        return report

    def _funnel_doc(self, snapshot_id: str) -> dict:
        self.get_snapshot(snapshot_id)
        doc = self.store.get("funnel", snapshot_id)
        if doc is None:
            raise PlatformError(
                FUNNEL_NOT_RUN, f"snapshot {snapshot_id!r} has no funnel result; run aggregate first"
            )
        return doc

    def funnel_rows(self, snapshot_id: str) -> list[tuple[str, int]]:
        return [tuple(row) for row in self._funnel_doc(snapshot_id)["rows"]]

    @staticmethod
    def _feasibility_votes(payload: dict) -> dict[str, list[Feasibility]]:
        """Votes per argument, for every argument holding a Phase 1 task."""
        votes: dict[str, list[Feasibility]] = {
            task["argument_id"]: []
            for task in payload["tasks"].values()
            if task["kind"] == KIND_PHASE1
        }
        for resp in payload["p1_responses"].values():
            votes[resp["argument"]].append(Feasibility(resp["feasibility"]))
        return votes

    @staticmethod
    def _chains_by_pair(payload: dict) -> dict[str, list[str]]:
        chains: dict[str, list[str]] = {}
        for chain_id in sorted(payload["chains"]):
            record = payload["chains"][chain_id]
            chains.setdefault(record["argument_id"], []).append(chain_id)
        return chains

    @staticmethod
    def _validity_votes(payload: dict) -> dict[str, list[bool]]:
        votes: dict[str, list[bool]] = {}
        for vote in payload["validity_votes"].values():
            votes.setdefault(vote["chain_id"], []).append(bool(vote["vote"]))
        return votes

    @staticmethod
    def _score_votes(payload: dict) -> dict[str, list[int]]:
        votes: dict[str, list[int]] = {}
        for vote in payload["score_votes"].values():
            votes.setdefault(vote["chain_id"], []).append(int(vote["score"]))
        return votes

    def _funnel_chain_ids(self, payload: dict, funnel: dict, kept_only: bool) -> list[str]:
        buckets = funnel["chain_buckets"]
        ids = [cid for cid in buckets if not kept_only or buckets[cid] == BUCKET_KEEP]
        return sorted(ids, key=lambda cid: (payload["chains"][cid]["argument_id"], cid))

    def stats_report(self, snapshot_id: str) -> dict:
        """Dataset statistics in two columns: every chain that entered
        the funnel (collection phase) and the kept subset (after
        filtering). Coverage denominators are all Phase 1 pairs."""
        payload = self.get_snapshot(snapshot_id)["payload"]
        funnel = self._funnel_doc(snapshot_id)
        annotated = self._annotated_arguments(payload)
        all_ids = self._funnel_chain_ids(payload, funnel, kept_only=False)
        kept_ids = self._funnel_chain_ids(payload, funnel, kept_only=True)
        all_records = [payload["chains"][cid] for cid in all_ids]
        kept_records = [payload["chains"][cid] for cid in kept_ids]
        return {
            "collected": metrics.dataset_statistics(all_records, annotated).__dict__,
            "kept": metrics.dataset_statistics(kept_records, annotated).__dict__,
        }

    def coverage_report(self, snapshot_id: str) -> dict:
        payload = self.get_snapshot(snapshot_id)["payload"]
        funnel = self._funnel_doc(snapshot_id)
        annotated = self._annotated_arguments(payload)
        all_ids = self._funnel_chain_ids(payload, funnel, kept_only=False)
        kept_ids = self._funnel_chain_ids(payload, funnel, kept_only=True)
        return {
            "collected": metrics.coverage_histogram(
                [payload["chains"][cid] for cid in all_ids], annotated,
                max_k=self.config.task_capacity,
            ),
            "kept": metrics.coverage_histogram(
                [payload["chains"][cid] for cid in kept_ids], annotated,
                max_k=self.config.task_capacity,
            ),
        }

    def agreement_report(self, snapshot_id: str) -> dict:
        """Krippendorff's alpha over the Phase 2 votes: nominal for the
        yes/no validity votes, interval for the 1-5 scores."""
        payload = self.get_snapshot(snapshot_id)["payload"]
        validity_triples = [
            (vote["chain_id"], vote["worker"], "Yes" if vote["vote"] else "No")
            for vote in payload["validity_votes"].values()
        ]
        score_triples = [
            (vote["chain_id"], vote["worker"], int(vote["score"]))
            for vote in payload["score_votes"].values()
        ]
        result: dict = {}
        for name, triples, metric in (
            ("validity", validity_triples, metrics.NOMINAL),
            ("scores", score_triples, metrics.INTERVAL),
        ):
            if not triples:
                result[name] = {"alpha": None, "n_items": 0, "n_raters": 0, "n_pairable": 0}
                continue
            matrix, items, raters = metrics.votes_to_matrix(triples)
            pairable = sum(
                len([v for v in row if v is not None])
                for row in matrix
                if len([v for v in row if v is not None]) >= 2
            )
            try:
                alpha = metrics.krippendorff_alpha(matrix, metric)
            except metrics.InsufficientDataError:
                alpha = None
            result[name] = {
                "alpha": alpha,
                "n_items": len(items),
                "n_raters": len(raters),
                "n_pairable": pairable,
            }
        return result

    @staticmethod
    def _annotated_arguments(payload: dict) -> list[Argument]:
        """Arguments that were sent to Phase 1 (the coverage denominator)."""
        ids = sorted(
            task["argument_id"]
            for task in payload["tasks"].values()
            if task["kind"] == KIND_PHASE1
        )
        return [
            Argument(
                id=doc["id"],
                topic=doc["topic"],
                claim=doc["claim"],
                premise=doc["premise"],
                stance_label=doc["stance_label"],
                stance_conf=doc["stance_conf"],
                quality=doc["quality"],
            )
            for doc in (payload["arguments"][arg_id] for arg_id in ids)
        ]

    # -- export -------------------------------------------------------

    def export_dataset(self, snapshot_id: str, bucket: str = EXPORT_BUCKET_KEPT) -> str:
        """CSV of funnel chains with verdict columns, ordered by argument
        id then chain id. ``kept`` exports exactly the funnel's Keep
        bucket; ``all`` exports every chain that entered the funnel."""
        if bucket not in (EXPORT_BUCKET_KEPT, EXPORT_BUCKET_ALL):
            raise ValueError(f"bucket must be 'kept' or 'all', got {bucket!r}")
        payload = self.get_snapshot(snapshot_id)["payload"]
        funnel = self._funnel_doc(snapshot_id)
        ids = self._funnel_chain_ids(payload, funnel, kept_only=bucket == EXPORT_BUCKET_KEPT)

        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=list(EXPORT_FIELDS), lineterminator="\n")
        writer.writeheader()
        for cid in ids:
            record = dict(payload["chains"][cid])
            record["bucket"] = funnel["chain_buckets"][cid]
            record["validity_decision"] = funnel["chain_validity"].get(cid, "")
            record["score_decision"] = funnel["chain_scores"].get(cid, "")
            writer.writerow(record)
        return out.getvalue()
