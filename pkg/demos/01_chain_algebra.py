"""Reasoning chains and the two-connector algebra.

A chain links an action to an outcome through a piece of hidden
reasoning: action -> implicit -> outcome, each arc labeled cause or
suppress. This script walks the algebra, builds a chain by hand, and
shows how structural validation and duplicate detection treat it.

Run: python3 demos/01_chain_algebra.py
"""

from itertools import product

from causeway import (
    ActionEntity,
    CausalRelation,
    ImplicitCausalKnowledge,
    OutcomeEntity,
    ReasoningChain,
    chain_dedup_key,
    compose,
    net_relation,
    validate_chain,
)

CAUSE, SUPPRESS = CausalRelation.CAUSE, CausalRelation.SUPPRESS


def main() -> None:
    print("Composition of two arcs (equal labels give cause, mixed give suppress):")
    for r1, r2 in product(CausalRelation, repeat=2):
        print(f"  {r1.value:8s} then {r2.value:8s} -> {compose(r1, r2).value}")

    claim = "We should ban whaling"
    premise = "Whales are an endangered species."

    chain = ReasoningChain(
        action=ActionEntity("Banning whaling"),
        rel_ai=CAUSE,
        implicit=ImplicitCausalKnowledge(
            "commercial hunting is the main pressure on whale populations",
            author="w1",
        ),
        rel_io=CAUSE,
        outcome=OutcomeEntity("the recovery of endangered whales", author="w1"),
    )
    print(f"\nChain: {chain.action.text} -[{chain.rel_ai.value}]-> "
          f"{chain.implicit.text} -[{chain.rel_io.value}]-> {chain.outcome.text}")
    print(f"Net action-outcome relation: {net_relation(chain).value}")

    print(f"\nViolations on the well-formed chain: {validate_chain(chain, claim, premise)}")

    # A lazy response that just restates the supporting statement is
    # flagged; the workflow turns these violations into rejections.
    lazy = ReasoningChain(
        action=chain.action,
        rel_ai=CAUSE,
        implicit=ImplicitCausalKnowledge("Whales are an endangered species"),
        rel_io=CAUSE,
        outcome=chain.outcome,
    )
    for violation in validate_chain(lazy, claim, premise):
        print(f"Lazy paraphrase flagged: {violation.code} on {violation.component!r}")

    # Duplicate detection ignores case, spacing, and terminal punctuation.
    def key(c: ReasoningChain):
        return chain_dedup_key(
            c.action.text, c.rel_ai, c.implicit.text, c.rel_io, c.outcome.text
        )

    restated = ReasoningChain(
        action=ActionEntity("banning  whaling"),
        rel_ai=CAUSE,
        implicit=ImplicitCausalKnowledge(
            "Commercial hunting is the main pressure on whale populations."
        ),
        rel_io=CAUSE,
        outcome=OutcomeEntity("The recovery of endangered whales"),
    )
    print(f"\nRestated copy deduplicates to the same key: {key(chain) == key(restated)}")

    flipped = ReasoningChain(
        action=chain.action, rel_ai=SUPPRESS,
        implicit=chain.implicit, rel_io=CAUSE, outcome=chain.outcome,
    )
    print(f"Flipping one connector yields a distinct chain: {key(chain) != key(flipped)}")


if __name__ == "__main__":
    main()
