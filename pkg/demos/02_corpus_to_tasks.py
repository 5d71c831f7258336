"""From a raw argument corpus to open annotation tasks.

Ingestion filters rows on stance and quality thresholds, the extractor
derives a gerund action phrase from each stance, and the platform opens
one Phase 1 task per admitted argument. Rows the rule grammar cannot
parse stay blocked until an operator supplies the action by hand.

Run: python3 demos/02_corpus_to_tasks.py
"""

import io
import tempfile

from causeway import Platform, extract_action, parse_config

CORPUS = """\
id,topic,claim,premise,stance_label,stance_conf,quality
a1,Ban whaling,We should ban whaling,Whales are an endangered species.,Support,0.9,0.8
a2,Ban whaling,We should ban whaling,Whaling ships damage marine habitats.,Support,0.9,0.8
a3,Ban whaling,Whaling fleets deserve support,Tradition matters to coastal towns.,Against,0.9,0.8
a4,Ban whaling,We should ban whaling,Too thin.,Support,0.9,0.3
a5,Legalize surrogacy,We should legalize surrogacy,It gives infertile couples a path.,Support,0.9,0.8
a6,Ban whaling,Whaling must end now,Quota systems are routinely ignored.,Support,0.9,0.8
"""


def main() -> None:
    print("Action extraction on its own, before any storage is involved:")
    for claim in ("We should ban whaling", "We should introduce compulsory voting"):
        action = extract_action(claim)
        print(f"  {claim!r} -> {action.text!r}")

    with tempfile.TemporaryDirectory() as root:
        config = parse_config({
            "storage_path": f"{root}/causeway.db",
            "ingestion": {"topics": ["Ban whaling"]},
        })
        platform = Platform(config)
        try:
            result = platform.ingest_corpus(io.StringIO(CORPUS))
            print(f"\nAdmitted {len(result.admitted)} of {len(result.admitted) + len(result.rejected)} rows")
            for rejected in result.rejected:
                row_id = rejected.row.get("id", "?")
                print(f"  rejected {row_id}: {rejected.reason}")

            opened = platform.open_phase1_tasks()
            print(f"\nOpened tasks: {opened['opened']}")
            # a6's stance does not match any extraction rule, so its task
            # waits for a hand-entered action phrase.
            print(f"Blocked, needs a manual action: {opened['missing_action']}")

            platform.set_manual_action("a6", "Ending whaling")
            retry = platform.open_phase1_tasks(["a6"])
            print(f"After manual entry: opened {retry['opened']}")

            doc = platform.store.get("argument", "a6")
            print(f"Stored action for a6: {doc['action']}")
        finally:
            platform.close()


if __name__ == "__main__":
    main()
