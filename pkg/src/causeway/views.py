"""Worker-facing task payloads and the scoring rubric.

Annotators see simplified vocabulary: the stance of the argument, its
supporting statement, the hidden reasoning, and the two connectors.
Field names in these payloads follow that vocabulary so no annotator
surface leaks internal terminology.
"""

from __future__ import annotations

CONNECTOR_OPTIONS = ("cause", "suppress")
FEASIBILITY_OPTIONS = ("CanWrite", "CannotWrite", "Unsure")

# Scoring guideline shown beside each 1-5 button in Phase 2.
SCORE_RUBRIC: dict[int, str] = {
    1: (
        "Hidden reasoning is completely nonsensical and fails to explain the"
        " reasoning link between Action and Outcome.\nOR\nThe use of both"
        " connectors is logically incorrect."
    ),
    2: (
        "Hidden reasoning is related to the argument but is a paraphrase of"
        " the Stance/Supporting Statement.\nOR\nThe use of one or more"
        " connectors is logically incorrect."
    ),
    3: (
        "Hidden reasoning is related to the argument but instead of"
        " explaining the reasoning link between Action and Outcome, presents"
        " a new supporting statement.\nOR\nThe use of one or more connectors"
        " is logically incorrect."
    ),
    4: (
        "Hidden reasoning explains the reasoning link between Action and"
        " Outcome fairly good but needs some improvements in wordings.\nAND\n"
        "The use of both connectors is logically correct."
    ),
    5: (
        "Hidden reasoning makes it easy to understand the reasoning link"
        " between Action and Outcome.\nAND\nThe use of connectors is"
        " logically correct."
    ),
}


def chain_preview(action: str, rel_ai: str, implicit: str, rel_io: str, outcome: str) -> str:
    """One-line arrow rendering of a full chain, as shown before submit."""
    return f"{action} -> {rel_ai} -> {implicit} -> {rel_io} -> {outcome}"


def phase1_task_view(task: dict, argument: dict) -> dict:
    """Everything the two-step Phase 1 form needs.

    STEP 1 (outcome + feasibility) is always shown; STEP 2 fields apply
    only when the worker answers CanWrite.
    """
    action = argument["action"]
    return {
        "task_id": task["id"],
        "kind": "phase1",
        "topic": argument["topic"],
        "stance_text": argument["claim"],
        "supporting_statement": argument["premise"],
        "action_text": action["text"],
        "action_needs_review": action["needs_review"],
        "feasibility_options": list(FEASIBILITY_OPTIONS),
        "connector_options": list(CONNECTOR_OPTIONS),
        "outcome_required": True,
    }


def validity_task_view(task: dict, chain: dict, argument: dict) -> dict:
    return {
        "task_id": task["id"],
        "kind": "validity",
        "topic": argument["topic"],
        "supporting_statement": argument["premise"],
        "outcome_text": chain["outcome"],
        "question": (
            "Does the outcome correctly restate what the supporting statement"
            " says will happen?"
        ),
        "options": ["Yes", "No"],
    }


def score_task_view(task: dict, chain: dict, argument: dict) -> dict:
    return {
        "task_id": task["id"],
        "kind": "score",
        "topic": argument["topic"],
        "stance_text": argument["claim"],
        "supporting_statement": argument["premise"],
        "chain": {
            "action": chain["action"],
            "connector_1": chain["rel_ai"],
            "hidden_reasoning": chain["implicit"],
            "connector_2": chain["rel_io"],
            "outcome": chain["outcome"],
        },
        "preview": chain_preview(
            chain["action"], chain["rel_ai"], chain["implicit"], chain["rel_io"], chain["outcome"]
        ),
        "rubric": {str(k): v for k, v in SCORE_RUBRIC.items()},
        "score_options": [1, 2, 3, 4, 5],
    }
