"""A complete two-phase annotation run on one argument pair.

Phase 1: five writers answer the feasibility gate and, when they can,
author a chain. Aggregation decides whether the pair keeps collecting,
and writers whose feasibility answer matched the majority earn a bonus.
Phase 2: five fresh judges vote on each chain's outcome, then the same
judges score the surviving chains against the 1-5 rubric.

Run: python3 demos/03_two_phase_run.py
"""

import io
import tempfile

from causeway import Platform, parse_config

CORPUS = """\
id,topic,claim,premise,stance_label,stance_conf,quality
a1,Ban whaling,We should ban whaling,Whales are an endangered species.,Support,0.9,0.8
"""

WRITERS = ["w1", "w2", "w3", "w4", "w5"]
JUDGES = ["j1", "j2", "j3", "j4", "j5"]

PHASE1 = [
    ("w1", "CanWrite", "whale stocks recover once hunting stops"),
    ("w2", "CanWrite", "fishing fleets switch to other species"),
    ("w3", "CanWrite", "port inspections get tighter under a ban"),
    ("w4", "CannotWrite", None),
    ("w5", "Unsure", None),
]

VALIDITY = {
    "a1-c001": [True, True, True, True, True],
    "a1-c002": [True, True, True, False, False],
    "a1-c003": [False, False, False, False, True],
}

SCORES = {
    "a1-c001": [5, 4, 4, 3, 2],  # three good scores: kept
    "a1-c002": [1, 2, 2, 4, 5],  # three bad scores: discarded
}


def main() -> None:
    with tempfile.TemporaryDirectory() as root:
        config = parse_config({
            "storage_path": f"{root}/causeway.db",
            "ingestion": {"topics": ["Ban whaling"]},
        })
        platform = Platform(config)
        try:
            platform.ingest_corpus(io.StringIO(CORPUS))
            for worker in WRITERS + JUDGES:
                platform.workflow.register_worker(
                    worker, acceptance_rate=0.99, approved_tasks=6000, quiz_score=0.9
                )
            platform.open_phase1_tasks(["a1"])

            print("Phase 1 responses:")
            for worker, feasibility, implicit in PHASE1:
                receipt = platform.workflow.submit_phase1(
                    "p1-a1", worker,
                    outcome_text="the survival of endangered whales",
                    feasibility=feasibility,
                    implicit_text=implicit,
                    rel_ai="cause" if implicit else None,
                    rel_io="cause" if implicit else None,
                    sanity_confirmed=True,
                )
                wrote = receipt.chain_id or "no chain"
                print(f"  {worker}: {feasibility:12s} -> {wrote}")

            platform.aggregate_pending("phase1")
            verdict = platform.store.get("verdict", "p1-a1")
            print(f"\nFeasibility verdict: {verdict['decision']} (tally {verdict['tally']})")

            platform.grant_bonuses_pending()
            print("Pay ledger (bonus for a feasibility answer in the majority):")
            for _, entry in platform.store.items_prefix("bonus", "p1-a1/"):
                print(f"  {entry['worker']}: base {entry['base_cents']}"
                      f" + bonus {entry['bonus_cents']} ({entry['reason']})")

            platform.open_validity_tasks_for_keeps()
            print("\nPhase 2 validity votes:")
            for chain_id, votes in VALIDITY.items():
                for judge, vote in zip(JUDGES, votes):
                    platform.workflow.submit_validity(f"v-{chain_id}", judge, vote)
                print(f"  {chain_id}: {sum(votes)} of {len(votes)} say the outcome holds")
            platform.aggregate_pending("validity")

            print("\nPhase 2 rubric scores (only chains with a valid outcome):")
            for chain_id, scores in SCORES.items():
                for judge, score in zip(JUDGES, scores):
                    platform.workflow.submit_score(f"s-{chain_id}", judge, score)
                print(f"  {chain_id}: {scores}")
            result = platform.aggregate_pending("score")
            for item in result["aggregated"]:
                tally = platform.store.get("verdict", item["task"])["tally"]
                print(f"  {item['task']}: {item['decision']} (tally {tally})")
        finally:
            platform.close()


if __name__ == "__main__":
    main()
