"""Task lifecycles for both annotation phases.

Phase 1 tasks collect feasibility judgments, outcome entities, and
chains for one argument each. Phase 2 runs two stages per chain:
a validity task (was the outcome read correctly?) and, for chains that
pass, a score task reusing the same five judges. Every accepted
submission is one committed store transaction; capacity checks happen
inside that transaction, so the 5-response cap holds under concurrency.

Task states move forward only: open -> full -> aggregated -> closed,
where "full" is skipped when a task is aggregated on partial votes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .aggregation import (
    AggregationVerdict,
    Decision,
    Feasibility,
    aggregate_feasibility,
    aggregate_outcome_validity,
    aggregate_scores,
)
from .chains import (
    ActionEntity,
    CausalRelation,
    ImplicitCausalKnowledge,
    OutcomeEntity,
    ReasoningChain,
    chain_to_record,
    validate_chain,
    EMPTY_COMPONENT,
)
from .config import ServiceConfig
from .store import Batch, Store

CAPACITY_EXHAUSTED = "CAPACITY_EXHAUSTED"
DUPLICATE_SUBMISSION = "DUPLICATE_SUBMISSION"
NOT_QUALIFIED = "NOT_QUALIFIED"
CHAIN_INVALID = "CHAIN_INVALID"
MISSING_ACTION_ENTITY = "MISSING_ACTION_ENTITY"
DUPLICATE_TASK = "DUPLICATE_TASK"
AGGREGATION_INCOMPLETE = "AGGREGATION_INCOMPLETE"
NOT_FOUND = "NOT_FOUND"

PHASE1 = "phase1"
PHASE2 = "phase2"

KIND_PHASE1 = "phase1"
KIND_VALIDITY = "validity"
KIND_SCORE = "score"

STATE_OPEN = "open"
STATE_FULL = "full"
STATE_AGGREGATED = "aggregated"
STATE_CLOSED = "closed"

_STATE_ORDER = {STATE_OPEN: 0, STATE_FULL: 1, STATE_AGGREGATED: 2, STATE_CLOSED: 3}


class WorkflowError(Exception):
    """Machine-readable rejection; ``code`` is one of the constants above."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


@dataclass(frozen=True)
class Receipt:
    task_id: str
    worker_id: str
    chain_id: str | None
    task_state: str


def _violation_messages(violations) -> str:
    return "; ".join(
        f"{v.code}({v.component}): {v.detail}" if v.detail else f"{v.code}({v.component})"
        for v in violations
    )


class Workflow:
    def __init__(self, store: Store, config: ServiceConfig):
        self.store = store
        self.config = config

    # -- workers ------------------------------------------------------

    def register_worker(
        self,
        worker_id: str,
        acceptance_rate: float,
        approved_tasks: int,
        quiz_score: float | None = None,
    ) -> dict:
        """Upsert a worker and compute phase access from the gates.

        All three gates must pass; a missing quiz score closes both
        phases until the worker takes the quiz.
        """
        if not 0.0 <= acceptance_rate <= 1.0:
            raise ValueError(f"acceptance_rate must be within [0, 1], got {acceptance_rate}")
        if approved_tasks < 0:
            raise ValueError(f"approved_tasks must be non-negative, got {approved_tasks}")
        if quiz_score is not None and not 0.0 <= quiz_score <= 1.0:
            raise ValueError(f"quiz_score must be within [0, 1], got {quiz_score}")
        gates = self.config.qualification
        qualified = (
            quiz_score is not None
            and quiz_score >= gates.min_quiz_score
            and acceptance_rate >= gates.min_acceptance_rate
            and approved_tasks >= gates.min_approved_tasks
        )
        record = {
            "id": worker_id,
            "acceptance_rate": acceptance_rate,
            "approved_tasks": approved_tasks,
            "quiz_score": quiz_score,
            "phases_allowed": [PHASE1, PHASE2] if qualified else [],
        }
        with self.store.batch() as batch:
            batch.put("worker", worker_id, record)
        return record

    def get_worker(self, worker_id: str) -> dict:
        record = self.store.get("worker", worker_id)
        if record is None:
            raise WorkflowError(NOT_FOUND, f"unknown worker {worker_id!r}")
        return record

    # -- phase 1 ------------------------------------------------------

    def open_phase1_task(self, argument_id: str) -> dict:
        argument = self.store.get("argument", argument_id)
        if argument is None:
            raise WorkflowError(NOT_FOUND, f"unknown argument {argument_id!r}")
        if argument.get("action") is None:
            raise WorkflowError(
                MISSING_ACTION_ENTITY,
                f"no action entity for argument {argument_id!r}; extraction found no match"
                " and no manual entry exists",
            )
        task_id = f"p1-{argument_id}"
        task = {
            "id": task_id,
            "kind": KIND_PHASE1,
            "argument_id": argument_id,
            "chain_id": None,
            "capacity": self.config.task_capacity,
            "state": STATE_OPEN,
            "n_accepted": 0,
        }
        with self.store.batch() as batch:
            if batch.exists("task", task_id):
                raise WorkflowError(DUPLICATE_TASK, f"phase 1 task for {argument_id!r} already open")
            batch.put("task", task_id, task)
        return task

    def submit_phase1(
        self,
        task_id: str,
        worker_id: str,
        outcome_text: str,
        feasibility: str,
        implicit_text: str | None = None,
        rel_ai: str | None = None,
        rel_io: str | None = None,
        sanity_confirmed: bool = False,
        client_token: str | None = None,
    ) -> Receipt:
        """Accept one Phase 1 response.

        The outcome entity is mandatory regardless of feasibility. A
        chain exists iff feasibility is CanWrite; the chain's action
        comes from the task, its outcome from ``outcome_text``, so the
        worker authors only the hidden reasoning and the two connectors.
        """
        try:
            feas = Feasibility(feasibility)
        except ValueError:
            raise WorkflowError(
                CHAIN_INVALID, f"unknown feasibility answer {feasibility!r}"
            ) from None

        with self.store.batch() as batch:
            replay = self._idempotent_replay(batch, worker_id, client_token)
            if replay is not None:
                return replay
            task = self._load_task(batch, task_id, KIND_PHASE1)
            worker = self._require_worker(batch, worker_id, PHASE1)
            self._require_capacity(batch, task, worker_id, "p1resp")

            argument = batch.get("argument", task["argument_id"])
            chain = self._build_phase1_chain(
                task, argument, worker_id, outcome_text, feas,
                implicit_text, rel_ai, rel_io, sanity_confirmed,
            )

            chain_id = None
            if chain is not None:
                chain_id = self._next_chain_id(batch, task["argument_id"])
                record = chain_to_record(chain, task["argument_id"], task_id)
                batch.put("chain", chain_id, record)

            batch.put(
                "p1resp",
                f"{task_id}/{worker_id}",
                {
                    "worker": worker_id,
                    "argument": task["argument_id"],
                    "outcome_text": outcome_text,
                    "feasibility": feas.value,
                    "chain_id": chain_id,
                    "sanity_confirmed": bool(sanity_confirmed),
                },
            )
            batch.put("p1seen", f"{task['argument_id']}/{worker_id}", 1)
            task["n_accepted"] += 1
            if task["n_accepted"] >= task["capacity"]:
                task["state"] = STATE_FULL
            batch.put("task", task_id, task)
            receipt = Receipt(task_id, worker_id, chain_id, task["state"])
            self._record_idempotent(batch, worker_id, client_token, receipt)
            return receipt

    def _build_phase1_chain(
        self, task, argument, worker_id, outcome_text, feas,
        implicit_text, rel_ai, rel_io, sanity_confirmed,
    ) -> ReasoningChain | None:
        if not outcome_text or not outcome_text.strip():
            raise WorkflowError(
                CHAIN_INVALID, f"{EMPTY_COMPONENT}(outcome): the outcome entity is mandatory"
            )
        has_chain_fields = any(v is not None for v in (implicit_text, rel_ai, rel_io))
        if feas is not Feasibility.CAN_WRITE:
            if has_chain_fields:
                raise WorkflowError(
                    CHAIN_INVALID,
                    f"a chain was attached to a {feas.value} response; chains are"
                    " only legal when the reasoning can be written",
                )
            return None

        if implicit_text is None or rel_ai is None or rel_io is None:
            raise WorkflowError(
                CHAIN_INVALID,
                "CanWrite responses must carry hidden reasoning and both connectors",
            )
        if not sanity_confirmed:
            raise WorkflowError(
                CHAIN_INVALID, "the sanity confirmation must be checked before submitting a chain"
            )
        try:
            parsed_ai = CausalRelation.parse(rel_ai)
            parsed_io = CausalRelation.parse(rel_io)
        except ValueError as exc:
            raise WorkflowError(CHAIN_INVALID, str(exc)) from None

        action = argument["action"]
        chain = ReasoningChain(
            action=ActionEntity(
                text=action["text"],
                source_claim_id=argument["id"],
                hand_entered=action["hand_entered"],
                needs_review=action["needs_review"],
            ),
            rel_ai=parsed_ai,
            implicit=ImplicitCausalKnowledge(text=implicit_text, author=worker_id),
            rel_io=parsed_io,
            outcome=OutcomeEntity(
                text=outcome_text, source_premise_id=argument["id"], author=worker_id
            ),
        )
        violations = validate_chain(chain, claim=argument["claim"], premise=argument["premise"])
        if violations:
            raise WorkflowError(CHAIN_INVALID, _violation_messages(violations))
        return chain

    def _next_chain_id(self, batch: Batch, argument_id: str) -> str:
        seq = (batch.get("chainseq", argument_id) or 0) + 1
        batch.put("chainseq", argument_id, seq)
        return f"{argument_id}-c{seq:03d}"

    def aggregate_phase1(self, task_id: str) -> AggregationVerdict:
        """Aggregate feasibility votes on whatever responses exist.

        Partial tallies are legal (a task may aggregate before filling);
        the open -> aggregated transition then skips full.
        """
        with self.store.batch() as batch:
            task = self._load_task(batch, task_id, KIND_PHASE1)
            self._require_not_aggregated(task)
            votes = [
                Feasibility(resp["feasibility"])
                for _, resp in batch.items_prefix("p1resp", f"{task_id}/")
            ]
            verdict = aggregate_feasibility(
                votes, subject=task_id,
                threshold=self.config.aggregation.feasibility_threshold,
            )
            self._store_verdict(batch, task, verdict)
            return verdict

    def grant_feasibility_bonuses(self, task_id: str) -> list[dict]:
        """Pay the bonus to every worker whose feasibility answer landed
        in the majority class (count >= threshold). No majority, no bonus."""
        with self.store.batch() as batch:
            task = self._load_task(batch, task_id, KIND_PHASE1)
            verdict = batch.get("verdict", task_id)
            if verdict is None:
                raise WorkflowError(
                    AGGREGATION_INCOMPLETE, f"task {task_id!r} has no feasibility verdict yet"
                )
            tally = verdict["tally"]
            threshold = self.config.aggregation.feasibility_threshold
            majority = {answer for answer, count in tally.items() if count >= threshold}
            pay = self.config.payments
            entries = []
            for key, resp in batch.items_prefix("p1resp", f"{task_id}/"):
                bonus = pay.phase1_bonus_cents if resp["feasibility"] in majority else 0
                entry = {
                    "worker": resp["worker"],
                    "task": task_id,
                    "base_cents": pay.phase1_base_cents,
                    "bonus_cents": bonus,
                    "reason": "feasibility answer matched majority" if bonus else "base pay",
                }
                batch.put("bonus", key, entry)
                entries.append(entry)
            return entries

    # -- phase 2 ------------------------------------------------------

    def open_validity_tasks(self, chain_ids: list[str]) -> list[dict]:
        """One validity task per chain, capacity 5.

        Chains must come from aggregated Phase 1 tasks. Chains that
        already have a validity task are skipped, so re-running after
        a partial failure creates only the missing tasks.
        """
        created = []
        with self.store.batch() as batch:
            for chain_id in chain_ids:
                record = batch.get("chain", chain_id)
                if record is None:
                    raise WorkflowError(NOT_FOUND, f"unknown chain {chain_id!r}")
                p1_task = batch.get("task", record["phase1_task_id"])
                if p1_task is None or _STATE_ORDER[p1_task["state"]] < _STATE_ORDER[STATE_AGGREGATED]:
                    raise WorkflowError(
                        AGGREGATION_INCOMPLETE,
                        f"chain {chain_id!r} comes from a Phase 1 task that has not aggregated",
                    )
                task_id = f"v-{chain_id}"
                if batch.exists("task", task_id):
                    continue
                task = {
                    "id": task_id,
                    "kind": KIND_VALIDITY,
                    "argument_id": record["argument_id"],
                    "chain_id": chain_id,
                    "capacity": self.config.task_capacity,
                    "state": STATE_OPEN,
                    "n_accepted": 0,
                }
                batch.put("task", task_id, task)
                created.append(task)
        return created

    def submit_validity(
        self, task_id: str, worker_id: str, outcome_valid: bool,
        client_token: str | None = None,
    ) -> Receipt:
        if not isinstance(outcome_valid, bool):
            raise WorkflowError(CHAIN_INVALID, "outcome_valid must be a yes/no answer")
        with self.store.batch() as batch:
            replay = self._idempotent_replay(batch, worker_id, client_token)
            if replay is not None:
                return replay
            task = self._load_task(batch, task_id, KIND_VALIDITY)
            self._require_worker(batch, worker_id, PHASE2)
            self._require_no_phase1_overlap(batch, task, worker_id)
            self._require_capacity(batch, task, worker_id, "vvote")
            batch.put(
                "vvote",
                f"{task_id}/{worker_id}",
                {"worker": worker_id, "chain_id": task["chain_id"], "vote": outcome_valid},
            )
            task["n_accepted"] += 1
            if task["n_accepted"] >= task["capacity"]:
                task["state"] = STATE_FULL
            batch.put("task", task_id, task)
            receipt = Receipt(task_id, worker_id, None, task["state"])
            self._record_idempotent(batch, worker_id, client_token, receipt)
            return receipt

    def aggregate_validity(self, task_id: str) -> AggregationVerdict:
        """Aggregate yes/no votes; a Keep verdict opens the score task
        restricted to this task's own judges."""
        with self.store.batch() as batch:
            task = self._load_task(batch, task_id, KIND_VALIDITY)
            self._require_not_aggregated(task)
            votes = [
                vote["vote"] for _, vote in batch.items_prefix("vvote", f"{task_id}/")
            ]
            verdict = aggregate_outcome_validity(
                votes, subject=task_id,
                threshold=self.config.aggregation.validity_threshold,
            )
            self._store_verdict(batch, task, verdict)
            if verdict.decision is Decision.KEEP:
                score_task = {
                    "id": f"s-{task['chain_id']}",
                    "kind": KIND_SCORE,
                    "argument_id": task["argument_id"],
                    "chain_id": task["chain_id"],
                    "capacity": task["capacity"],
                    "state": STATE_OPEN,
                    "n_accepted": 0,
                }
                batch.put("task", score_task["id"], score_task)
            return verdict

    def submit_score(
        self, task_id: str, worker_id: str, score: int,
        client_token: str | None = None,
    ) -> Receipt:
        """Scores reuse the validity assignment: only workers who voted
        on this chain's validity may score it."""
        if not isinstance(score, int) or isinstance(score, bool) or not 1 <= score <= 5:
            raise WorkflowError(CHAIN_INVALID, f"score must be an integer in 1..5, got {score!r}")
        with self.store.batch() as batch:
            replay = self._idempotent_replay(batch, worker_id, client_token)
            if replay is not None:
                return replay
            task = self._load_task(batch, task_id, KIND_SCORE)
            self._require_worker(batch, worker_id, PHASE2)
            self._require_no_phase1_overlap(batch, task, worker_id)
            if not batch.exists("vvote", f"v-{task['chain_id']}/{worker_id}"):
                raise WorkflowError(
                    NOT_QUALIFIED,
                    f"worker {worker_id!r} did not judge this chain's validity; scoring"
                    " reuses the validity assignment",
                )
            self._require_capacity(batch, task, worker_id, "svote")
            batch.put(
                "svote",
                f"{task_id}/{worker_id}",
                {"worker": worker_id, "chain_id": task["chain_id"], "score": score},
            )
            task["n_accepted"] += 1
            if task["n_accepted"] >= task["capacity"]:
                task["state"] = STATE_FULL
            batch.put("task", task_id, task)
            receipt = Receipt(task_id, worker_id, None, task["state"])
            self._record_idempotent(batch, worker_id, client_token, receipt)
            return receipt

    def aggregate_score(self, task_id: str) -> AggregationVerdict:
        with self.store.batch() as batch:
            task = self._load_task(batch, task_id, KIND_SCORE)
            self._require_not_aggregated(task)
            scores = [
                vote["score"] for _, vote in batch.items_prefix("svote", f"{task_id}/")
            ]
            verdict = aggregate_scores(
                scores, subject=task_id,
                threshold=self.config.aggregation.score_threshold,
                mode=self.config.aggregation.score_mode,
            )
            self._store_verdict(batch, task, verdict)
            return verdict

    # -- task state ---------------------------------------------------

    def close_task(self, task_id: str) -> dict:
        with self.store.batch() as batch:
            task = batch.get("task", task_id)
            if task is None:
                raise WorkflowError(NOT_FOUND, f"unknown task {task_id!r}")
            if task["state"] != STATE_AGGREGATED:
                raise WorkflowError(
                    AGGREGATION_INCOMPLETE,
                    f"task {task_id!r} is {task['state']}; only aggregated tasks close",
                )
            task["state"] = STATE_CLOSED
            batch.put("task", task_id, task)
            return task

    def next_task(self, worker_id: str, phase: str) -> dict | None:
        """First open task the worker can still act on in the phase.

        Phase 2 interleaves validity and score tasks; score tasks only
        show for workers holding the matching validity vote.
        """
        worker = self.get_worker(worker_id)
        if phase not in (PHASE1, PHASE2):
            raise ValueError(f"phase must be {PHASE1!r} or {PHASE2!r}, got {phase!r}")
        if phase not in worker["phases_allowed"]:
            raise WorkflowError(NOT_QUALIFIED, f"worker {worker_id!r} lacks {phase} access")
        kinds = (KIND_PHASE1,) if phase == PHASE1 else (KIND_VALIDITY, KIND_SCORE)
        for task_id, task in self.store.items("task"):
            if task["kind"] not in kinds or task["state"] != STATE_OPEN:
                continue
            if phase == PHASE1:
                if not self.store.exists("p1resp", f"{task_id}/{worker_id}"):
                    return task
                continue
            if self.store.exists("p1seen", f"{task['argument_id']}/{worker_id}"):
                continue
            if task["kind"] == KIND_VALIDITY:
                if not self.store.exists("vvote", f"{task_id}/{worker_id}"):
                    return task
            else:
                has_validity = self.store.exists("vvote", f"v-{task['chain_id']}/{worker_id}")
                if has_validity and not self.store.exists("svote", f"{task_id}/{worker_id}"):
                    return task
        return None

    def list_tasks(self, kind: str | None = None, state: str | None = None) -> list[dict]:
        tasks = [task for _, task in self.store.items("task")]
        if kind is not None:
            tasks = [t for t in tasks if t["kind"] == kind]
        if state is not None:
            tasks = [t for t in tasks if t["state"] == state]
        return tasks

    # -- shared checks ------------------------------------------------

    def _load_task(self, batch: Batch, task_id: str, kind: str) -> dict:
        task = batch.get("task", task_id)
        if task is None:
            raise WorkflowError(NOT_FOUND, f"unknown task {task_id!r}")
        if task["kind"] != kind:
            raise WorkflowError(
                NOT_FOUND, f"task {task_id!r} is a {task['kind']} task, not {kind}"
            )
        return task

    def _require_worker(self, batch: Batch, worker_id: str, phase: str) -> dict:
        worker = batch.get("worker", worker_id)
        if worker is None:
            raise WorkflowError(NOT_QUALIFIED, f"unknown worker {worker_id!r}")
        if phase not in worker["phases_allowed"]:
            raise WorkflowError(
                NOT_QUALIFIED,
                f"worker {worker_id!r} does not meet the {phase} qualification gates",
            )
        return worker

    def _require_no_phase1_overlap(self, batch: Batch, task: dict, worker_id: str) -> None:
        if batch.exists("p1seen", f"{task['argument_id']}/{worker_id}"):
            raise WorkflowError(
                NOT_QUALIFIED,
                f"worker {worker_id!r} annotated this argument in Phase 1 and cannot"
                " judge its chains",
            )

    def _require_capacity(self, batch: Batch, task: dict, worker_id: str, ns: str) -> None:
        if batch.exists(ns, f"{task['id']}/{worker_id}"):
            raise WorkflowError(
                DUPLICATE_SUBMISSION, f"worker {worker_id!r} already submitted to {task['id']!r}"
            )
        if task["state"] != STATE_OPEN or task["n_accepted"] >= task["capacity"]:
            raise WorkflowError(
                CAPACITY_EXHAUSTED,
                f"task {task['id']!r} already holds {task['n_accepted']} responses",
            )

    def _require_not_aggregated(self, task: dict) -> None:
        if _STATE_ORDER[task["state"]] >= _STATE_ORDER[STATE_AGGREGATED]:
            raise WorkflowError(
                DUPLICATE_TASK, f"task {task['id']!r} already aggregated"
            )

    def _store_verdict(self, batch: Batch, task: dict, verdict: AggregationVerdict) -> None:
        batch.put(
            "verdict",
            task["id"],
            {
                "subject": verdict.subject,
                "decision": verdict.decision.value,
                "tally": verdict.tally,
                "rule": verdict.rule,
                "kind": task["kind"],
            },
        )
        task["state"] = STATE_AGGREGATED
        batch.put("task", task["id"], task)

    def _idempotent_replay(
        self, batch: Batch, worker_id: str, client_token: str | None
    ) -> Receipt | None:
        if client_token is None:
            return None
        # Tokens are scoped per worker so two clients that happen to pick
        # the same string never see each other's receipts.
        stored = batch.get("idem", f"{worker_id}/{client_token}")
        if stored is None:
            return None
        return Receipt(
            stored["task_id"], stored["worker_id"], stored["chain_id"], stored["task_state"]
        )

    def _record_idempotent(
        self, batch: Batch, worker_id: str, client_token: str | None, receipt: Receipt
    ) -> None:
        if client_token is None:
            return
        batch.put(
            "idem",
            f"{worker_id}/{client_token}",
            {
                "task_id": receipt.task_id,
                "worker_id": receipt.worker_id,
                "chain_id": receipt.chain_id,
                "task_state": receipt.task_state,
            },
        )
