"""Semi-structured reasoning chains and their cause/suppress algebra.

A chain links the action advocated by a stance statement to an outcome
stated in its supporting statement through one piece of hidden causal
knowledge:

    action --(rel_ai)--> implicit knowledge --(rel_io)--> outcome

Each arc carries one of two connector labels, ``cause`` or ``suppress``.
Composing the two arcs yields the net relation between action and
outcome; two suppressions cancel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum


class CausalRelation(str, Enum):
    CAUSE = "cause"
    SUPPRESS = "suppress"

    @classmethod
    def parse(cls, token: str) -> "CausalRelation":
        """Parse a connector token; only 'cause' and 'suppress' are legal."""
        normalized = token.strip().lower()
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"unknown causal relation {token!r}; expected 'cause' or 'suppress'")


def compose(r1: CausalRelation, r2: CausalRelation) -> CausalRelation:
    """Net relation of two chained arcs: equal labels give cause, mixed give suppress."""
    return CausalRelation.CAUSE if r1 == r2 else CausalRelation.SUPPRESS


@dataclass(frozen=True)
class ActionEntity:
    """Verbal phrase (gerund-initial) naming the action the stance advocates."""

    text: str
    source_claim_id: str = ""
    hand_entered: bool = False
    needs_review: bool = False


@dataclass(frozen=True)
class OutcomeEntity:
    """Noun phrase naming a consequence of the action, derived from the supporting statement."""

    text: str
    source_premise_id: str = ""
    author: str = ""


@dataclass(frozen=True)
class ImplicitCausalKnowledge:
    """Worker-authored phrase explaining why the action bears on the outcome."""

    text: str
    author: str = ""


@dataclass(frozen=True)
class ReasoningChain:
    action: ActionEntity
    rel_ai: CausalRelation
    implicit: ImplicitCausalKnowledge
    rel_io: CausalRelation
    outcome: OutcomeEntity


def net_relation(chain: ReasoningChain) -> CausalRelation:
    """Relation between the chain's action and outcome implied by its two arcs."""
    return compose(chain.rel_ai, chain.rel_io)


# Violation codes are machine-readable; the UI warns on them, programmatic
# import treats them as blocking.
EMPTY_COMPONENT = "EMPTY_COMPONENT"
PARAPHRASE_OF_CLAIM = "PARAPHRASE_OF_CLAIM"
PARAPHRASE_OF_PREMISE = "PARAPHRASE_OF_PREMISE"
OUTCOME_EQUALS_PREMISE = "OUTCOME_EQUALS_PREMISE"


@dataclass(frozen=True)
class Violation:
    code: str
    component: str
    detail: str = ""


_WS_RE = re.compile(r"\s+")
_TERMINAL_PUNCT_RE = re.compile(r"[.!?;:,]+$")


def normalize_text(text: str) -> str:
    """Case-fold, collapse whitespace, and strip terminal punctuation.

    This is the equality used for paraphrase and duplicate detection.
    Anything fuzzier than exact match after this normalization is a
    scoring judgement left to human review.
    """
    collapsed = _WS_RE.sub(" ", text.strip())
    return _TERMINAL_PUNCT_RE.sub("", collapsed).casefold().strip()


def validate_chain(chain: ReasoningChain, claim: str, premise: str) -> list[Violation]:
    """Check a chain's structural invariants against its source argument.

    Returns an empty list when the chain is well formed. Violations are
    data, not errors: callers decide whether they warn or block.
    """
    violations: list[Violation] = []
    for component, text in (
        ("action", chain.action.text),
        ("implicit", chain.implicit.text),
        ("outcome", chain.outcome.text),
    ):
        if not text.strip():
            violations.append(Violation(EMPTY_COMPONENT, component, "text is empty"))

    norm_claim = normalize_text(claim)
    norm_premise = normalize_text(premise)
    norm_implicit = normalize_text(chain.implicit.text)
    norm_outcome = normalize_text(chain.outcome.text)

    if norm_implicit and norm_implicit == norm_claim:
        violations.append(
            Violation(PARAPHRASE_OF_CLAIM, "implicit", "hidden reasoning restates the stance")
        )
    if norm_implicit and norm_implicit == norm_premise:
        violations.append(
            Violation(
                PARAPHRASE_OF_PREMISE, "implicit", "hidden reasoning restates the supporting statement"
            )
        )
    if norm_outcome and norm_outcome == norm_premise:
        violations.append(
            Violation(
                OUTCOME_EQUALS_PREMISE,
                "outcome",
                "outcome restates the supporting statement instead of naming a consequence",
            )
        )
    return violations


def chain_dedup_key(
    action: str,
    rel_ai: CausalRelation,
    implicit: str,
    rel_io: CausalRelation,
    outcome: str,
) -> tuple[str, str, str, str, str]:
    """Equality key for counting unique chains across a dataset."""
    return (
        normalize_text(action),
        rel_ai.value,
        normalize_text(implicit),
        rel_io.value,
        normalize_text(outcome),
    )


# Flat wire/export record field order, shared by the export writer and the UI.
FLAT_RECORD_FIELDS = (
    "argument_id",
    "action",
    "rel_ai",
    "implicit",
    "rel_io",
    "outcome",
    "author",
    "phase1_task_id",
)


def chain_to_record(
    chain: ReasoningChain, argument_id: str, phase1_task_id: str
) -> dict[str, str]:
    """Serialize a chain as the flat record used on the wire and in exports."""
    return {
        "argument_id": argument_id,
        "action": chain.action.text,
        "rel_ai": chain.rel_ai.value,
        "implicit": chain.implicit.text,
        "rel_io": chain.rel_io.value,
        "outcome": chain.outcome.text,
        "author": chain.implicit.author,
        "phase1_task_id": phase1_task_id,
    }


def chain_from_record(record: dict[str, str]) -> ReasoningChain:
    """Inverse of :func:`chain_to_record`; raises ValueError on bad connector tokens."""
    return ReasoningChain(
        action=ActionEntity(text=record["action"], source_claim_id=record["argument_id"]),
        rel_ai=CausalRelation.parse(record["rel_ai"]),
        implicit=ImplicitCausalKnowledge(text=record["implicit"], author=record.get("author", "")),
        rel_io=CausalRelation.parse(record["rel_io"]),
        outcome=OutcomeEntity(
            text=record["outcome"],
            source_premise_id=record["argument_id"],
            author=record.get("author", ""),
        ),
    )
