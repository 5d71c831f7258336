"""Snapshots, the filtering funnel, analytics, and the dataset export.

Aggregated state is frozen into a snapshot, the funnel counts what
survives each stage, and the reports answer the questions an operator
actually asks: how much did we collect, how much did we keep, how well
did the judges agree, and what goes into the released CSV.

Run: python3 demos/04_funnel_and_reports.py
"""

import io
import tempfile

from causeway import Platform, krippendorff_alpha, parse_config, votes_to_matrix

CORPUS = """\
id,topic,claim,premise,stance_label,stance_conf,quality
a1,Ban whaling,We should ban whaling,Whales are an endangered species.,Support,0.9,0.8
a2,Ban whaling,We should ban whaling,Whaling ships damage marine habitats.,Support,0.9,0.8
"""

WRITERS = ["w1", "w2", "w3", "w4", "w5"]
JUDGES = ["j1", "j2", "j3", "j4", "j5"]


def drive(platform: Platform) -> None:
    """One feasible pair with three chains, one infeasible pair."""
    platform.ingest_corpus(io.StringIO(CORPUS))
    for worker in WRITERS + JUDGES:
        platform.workflow.register_worker(
            worker, acceptance_rate=0.99, approved_tasks=6000, quiz_score=0.9
        )
    platform.open_phase1_tasks(["a1", "a2"])
    implicits = [
        "whale stocks recover once hunting stops",
        "fishing fleets switch to other species",
        "port inspections get tighter under a ban",
    ]
    for i, worker in enumerate(WRITERS):
        can_write = i < len(implicits)
        platform.workflow.submit_phase1(
            "p1-a1", worker,
            outcome_text="the survival of endangered whales",
            feasibility="CanWrite" if can_write else "CannotWrite",
            implicit_text=implicits[i] if can_write else None,
            rel_ai="cause" if can_write else None,
            rel_io="cause" if can_write else None,
            sanity_confirmed=True,
        )
        platform.workflow.submit_phase1(
            "p1-a2", worker,
            outcome_text="healthier marine habitats",
            feasibility="CannotWrite",
            sanity_confirmed=True,
        )
    platform.aggregate_pending("phase1")
    platform.open_validity_tasks_for_keeps()
    for chain, votes in (
        ("a1-c001", [True] * 5),
        ("a1-c002", [True, True, True, False, False]),
        ("a1-c003", [False] * 5),
    ):
        for judge, vote in zip(JUDGES, votes):
            platform.workflow.submit_validity(f"v-{chain}", judge, vote)
    platform.aggregate_pending("validity")
    for chain, scores in (("a1-c001", [5, 4, 4, 3, 2]), ("a1-c002", [1, 2, 2, 4, 5])):
        for judge, score in zip(JUDGES, scores):
            platform.workflow.submit_score(f"s-{chain}", judge, score)
    platform.aggregate_pending("score")


def main() -> None:
    with tempfile.TemporaryDirectory() as root:
        config = parse_config({
            "storage_path": f"{root}/causeway.db",
            "ingestion": {"topics": ["Ban whaling"]},
        })
        platform = Platform(config)
        try:
            drive(platform)
            snapshot = platform.create_snapshot()
            platform.run_snapshot_funnel(snapshot)

            print(f"Funnel for {snapshot}:")
            for label, value in platform.funnel_rows(snapshot):
                print(f"  {value:6d}  {label}")

            stats = platform.stats_report(snapshot)
            print("\nDataset statistics (collected vs kept):")
            for key in ("n_chains", "n_unique_chains", "pct_premise_with_chain"):
                collected, kept = stats["collected"][key], stats["kept"][key]
                print(f"  {key}: {collected} -> {kept}")

            coverage = platform.coverage_report(snapshot)
            print(f"\nChains-per-pair histogram, kept bucket: {coverage['kept']}")

            agreement = platform.agreement_report(snapshot)
            for name in ("validity", "scores"):
                row = agreement[name]
                alpha = "undefined" if row["alpha"] is None else f"{row['alpha']:.4f}"
                print(f"Agreement on {name}: alpha {alpha} over {row['n_items']} items")

            # The same coefficient is available standalone for any vote table.
            votes = [
                ("c1", "j1", 1), ("c1", "j2", 1), ("c1", "j3", 1),
                ("c2", "j1", 0), ("c2", "j2", 0), ("c2", "j3", 1),
                ("c3", "j1", 0), ("c3", "j2", 0), ("c3", "j3", 0),
            ]
            matrix, _, _ = votes_to_matrix(votes)
            print(f"Standalone alpha on a toy table: {krippendorff_alpha(matrix, metric='nominal'):.4f}")

            export = platform.export_dataset(snapshot, bucket="kept")
            print(f"\nKept-bucket export ({len(export.splitlines()) - 1} data rows):")
            for line in export.splitlines():
                print(f"  {line}")
        finally:
            platform.close()


if __name__ == "__main__":
    main()
