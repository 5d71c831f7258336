"""Deterministic fixture generator for the funnel reproduction suite.

Builds a six-topic corpus whose admitted rows land on the published
per-topic counts, plus a fully scripted two-phase annotation run whose
aggregation lands on every published funnel number at once:

    250 pairs -> 225 feasible -> 932 chains (831 unique)
    -> 103 invalid outcome -> 829 valid
    -> 443 Keep (398 unique) / 294 Discard / 92 Doubtful

The 92 doubtful chains are realized through missing score votes (four
votes splitting 2-2); everything else gets full five-vote tallies. No
randomness anywhere: regeneration is byte-stable, and the committed
artifacts under tests/fixtures/ are asserted to match regeneration.
"""

from __future__ import annotations

import csv
import gzip
import io
import json
import os

TOPICS = (
    ("Abandon the use of school uniform", 145),
    ("Abolish capital punishment", 176),
    ("Abolish zoos", 141),
    ("Ban whaling", 164),
    ("Introduce compulsory voting", 116),
    ("Legalize cannabis", 210),
)

# How many of each topic's arguments are sent to Phase 1 (sums to 250).
SELECTED_PER_TOPIC = (42, 42, 42, 41, 41, 42)

CLAIM_BY_TOPIC = {
    "Abandon the use of school uniform": "We should abandon the use of school uniform",
    "Abolish capital punishment": "We should abolish capital punishment",
    "Abolish zoos": "We should abolish zoos",
    "Ban whaling": "We should ban whaling",
    "Introduce compulsory voting": "We should introduce compulsory voting",
    "Legalize cannabis": "We should legalize cannabis",
}

_SLUGS = {
    "Abandon the use of school uniform": "uniform",
    "Abolish capital punishment": "capital",
    "Abolish zoos": "zoos",
    "Ban whaling": "whaling",
    "Introduce compulsory voting": "voting",
    "Legalize cannabis": "cannabis",
}

_FILLER = (
    "policy", "evidence", "society", "outcomes", "benefits", "harms",
    "communities", "institutions", "individuals", "incentives", "costs",
    "fairness", "safety", "freedom", "wellbeing", "tradition",
)

PHASE1_WORKERS = tuple(f"m{i:02d}" for i in range(1, 38))  # 37 chain writers
PHASE2_WORKERS = tuple(f"f{i:03d}" for i in range(1, 164))  # 163 judges


def _premise(slug: str, n: int) -> str:
    # Distinct, mildly varied-length sentences; content is inert filler.
    words = [_FILLER[(n + j) % len(_FILLER)] for j in range(8 + (n % 7))]
    return f"Supporting point {n} on {slug} concerns " + " ".join(words) + "."


def corpus_rows() -> list[dict[str, str]]:
    """952 admitted rows plus engineered rejects of every reason."""
    rows = []
    for topic, count in TOPICS:
        slug = _SLUGS[topic]
        claim = CLAIM_BY_TOPIC[topic]
        for n in range(1, count + 1):
            # Exercise the inclusive boundaries inside the admitted set.
            quality = "0.5" if n % 50 == 1 else f"{0.55 + (n % 40) * 0.01:.2f}"
            stance = "0.6" if n % 50 == 2 else f"{0.62 + (n % 35) * 0.01:.2f}"
            rows.append({
                "id": f"{slug}-{n:04d}",
                "topic": topic,
                "claim": claim,
                "premise": _premise(slug, n),
                "stance_label": "Support",
                "stance_conf": stance,
                "quality": quality,
            })
    # Rejected rows: one (or more) per rejection reason.
    rows.append({
        "id": "rej-quality-1", "topic": TOPICS[0][0], "claim": CLAIM_BY_TOPIC[TOPICS[0][0]],
        "premise": "Quality just under the line.", "stance_label": "Support",
        "stance_conf": "0.9", "quality": "0.49",
    })
    rows.append({
        "id": "rej-stance-1", "topic": TOPICS[1][0], "claim": CLAIM_BY_TOPIC[TOPICS[1][0]],
        "premise": "Stance confidence just under the line.", "stance_label": "Support",
        "stance_conf": "0.59", "quality": "0.8",
    })
    rows.append({
        "id": "rej-against-1", "topic": TOPICS[2][0], "claim": CLAIM_BY_TOPIC[TOPICS[2][0]],
        "premise": "An against-stance argument.", "stance_label": "Against",
        "stance_conf": "0.9", "quality": "0.8",
    })
    rows.append({
        "id": "rej-topic-1", "topic": "Ban plastic straws", "claim": "We should ban plastic straws",
        "premise": "Off-topic argument.", "stance_label": "Support",
        "stance_conf": "0.9", "quality": "0.8",
    })
    rows.append({
        "id": "uniform-0001", "topic": TOPICS[0][0], "claim": CLAIM_BY_TOPIC[TOPICS[0][0]],
        "premise": "Duplicate of an existing id.", "stance_label": "Support",
        "stance_conf": "0.9", "quality": "0.8",
    })
    rows.append({
        "id": "rej-parse-1", "topic": TOPICS[3][0], "claim": CLAIM_BY_TOPIC[TOPICS[3][0]],
        "premise": "Non-numeric quality.", "stance_label": "Support",
        "stance_conf": "0.9", "quality": "high",
    })
    return rows


def corpus_csv_text() -> str:
    out = io.StringIO()
    writer = csv.DictWriter(
        out,
        fieldnames=["id", "topic", "claim", "premise", "stance_label", "stance_conf", "quality"],
        lineterminator="\n",
    )
    writer.writeheader()
    for row in corpus_rows():
        writer.writerow(row)
    return out.getvalue()


def selected_argument_ids() -> list[str]:
    """The 250 arguments sent to Phase 1: first N per topic by id."""
    ids = []
    for (topic, _count), take in zip(TOPICS, SELECTED_PER_TOPIC):
        slug = _SLUGS[topic]
        ids.extend(f"{slug}-{n:04d}" for n in range(1, take + 1))
    return ids


# -- per-pair plan ----------------------------------------------------

# Feasibility profiles: (CanWrite, CannotWrite, Unsure) vote counts.
PROFILE_KEEP4 = ("CanWrite", "CanWrite", "CanWrite", "CanWrite", "CannotWrite")
PROFILE_KEEP5 = ("CanWrite",) * 5
PROFILE_DISCARD = ("CannotWrite", "CannotWrite", "CannotWrite", "Unsure", "Unsure")
PROFILE_DOUBTFUL = ("CanWrite", "CanWrite", "CannotWrite", "CannotWrite", "Unsure")

KEEP = "keep"
DISCARD = "discard"
DOUBTFUL = "doubtful"
INVALID = "invalid_outcome"


def _nonkept_pattern(keep_index: int) -> list[str]:
    """Terminal buckets of a Keep pair's non-kept chains, by pair index
    within the 225 Keep pairs. Totals across all pairs: 294 discard,
    103 invalid-outcome, 92 doubtful."""
    if keep_index < 26:  # 4 chains, 0 kept
        return [DISCARD, DISCARD, INVALID, DOUBTFUL]
    if keep_index < 56:  # 4 chains, 1 kept
        return [DISCARD, DISCARD, INVALID]
    if keep_index < 89:
        return [DISCARD, INVALID, DOUBTFUL]
    if keep_index < 103:  # 4 chains, 2 kept
        return [INVALID, DISCARD]
    if keep_index < 136:
        return [DOUBTFUL, DISCARD]
    if keep_index < 147:
        return [DISCARD, DISCARD]
    if keep_index < 193:  # 4 chains, 3 kept
        return [DISCARD]
    if keep_index < 195:  # 5 chains, 3 kept
        return [DISCARD, DISCARD]
    return [DISCARD]  # 5 chains, 4 kept


def _kept_count(keep_index: int) -> int:
    if keep_index < 26:
        return 0
    if keep_index < 89:
        return 1
    if keep_index < 147:
        return 2
    if keep_index < 195:
        return 3
    return 4


def pair_plans() -> list[dict]:
    """One plan per Phase 1 pair: feasibility profile plus, for chains,
    the terminal bucket and duplicate marking."""
    ids = selected_argument_ids()
    plans = []
    keep_index = 0
    for i, arg_id in enumerate(ids):
        if i < 193:
            profile = PROFILE_KEEP4
        elif i < 225:
            profile = PROFILE_KEEP5
        elif i < 240:
            profile = PROFILE_DISCARD
        else:
            profile = PROFILE_DOUBTFUL
        plan = {"argument": arg_id, "profile": profile, "chains": []}
        if profile in (PROFILE_KEEP4, PROFILE_KEEP5):
            kept = _kept_count(keep_index)
            buckets = [KEEP] * kept + _nonkept_pattern(keep_index)
            # Duplicate engineering: the first 45 two-kept pairs duplicate
            # their second kept chain; the 56 pairs whose pattern starts
            # [discard, discard] in the first two tiers duplicate the
            # second discard.
            dup_positions = set()
            if 89 <= keep_index < 134:
                dup_positions.add(1)  # second kept copies the first
            if keep_index < 56:
                dup_positions.add(kept + 1)  # second discard copies the first
            plan["chains"] = [
                {"bucket": bucket, "dup_of": pos - 1 if pos in dup_positions else None}
                for pos, bucket in enumerate(buckets)
            ]
            keep_index += 1
        elif profile is PROFILE_DOUBTFUL:
            # Two chains are written but the pair never clears the gate.
            plan["chains"] = [
                {"bucket": None, "dup_of": None},
                {"bucket": None, "dup_of": None},
            ]
        plans.append(plan)
    return plans


# -- scripted responses ----------------------------------------------


def _chain_texts(arg_id: str, ordinal: int, dup_of: int | None) -> tuple[str, str]:
    """(outcome, implicit) for a chain; duplicates copy their source."""
    source = ordinal if dup_of is None else dup_of + 1
    outcome = f"Expected consequence {source} described for {arg_id}"
    implicit = f"Hidden link {source} connecting the action to the consequence for {arg_id}"
    return outcome, implicit


_REL_CYCLE = (("cause", "cause"), ("cause", "suppress"), ("suppress", "cause"), ("suppress", "suppress"))


def build_script() -> dict:
    """The full scripted run, replayable through the public workflow API.

    Chain ids are predictable from submission order: the n-th CanWrite
    response on a pair creates chain ``{argument}-c{n:03d}``.
    """
    plans = pair_plans()
    phase1 = []
    chain_meta: list[tuple[str, dict]] = []  # (chain_id, plan-chain) in creation order
    for i, plan in enumerate(plans):
        arg_id = plan["argument"]
        workers = [PHASE1_WORKERS[(5 * i + j) % len(PHASE1_WORKERS)] for j in range(5)]
        responses = []
        chain_no = 0
        for j, feasibility in enumerate(plan["profile"]):
            response = {
                "worker": workers[j],
                "feasibility": feasibility,
                "outcome": f"Expected consequence {chain_no + 1} described for {arg_id}",
                "implicit": None,
                "rel_ai": None,
                "rel_io": None,
            }
            if feasibility == "CanWrite":
                meta = plan["chains"][chain_no]
                outcome, implicit = _chain_texts(arg_id, chain_no + 1, meta["dup_of"])
                source = chain_no if meta["dup_of"] is None else meta["dup_of"]
                rel_ai, rel_io = _REL_CYCLE[(i + source) % len(_REL_CYCLE)]
                response.update(
                    outcome=outcome, implicit=implicit, rel_ai=rel_ai, rel_io=rel_io
                )
                chain_no += 1
                if meta["bucket"] is not None:
                    chain_meta.append((f"{arg_id}-c{chain_no:03d}", meta))
            responses.append(response)
        phase1.append({"argument": arg_id, "responses": responses})

    validity = []
    scores = []
    for t, (chain_id, meta) in enumerate(chain_meta):
        judges = [PHASE2_WORKERS[(5 * t + j) % len(PHASE2_WORKERS)] for j in range(5)]
        bucket = meta["bucket"]
        if bucket == INVALID:
            votes = [False] * 5 if t % 2 == 0 else [False, False, False, True, True]
        else:
            votes = {
                0: [True] * 5,
                1: [True, True, True, True, False],
                2: [True, True, True, False, False],
            }[t % 3]
        validity.append({
            "chain": chain_id,
            "votes": [{"worker": w, "vote": v} for w, v in zip(judges, votes)],
        })
        if bucket == INVALID:
            continue
        if bucket == KEEP:
            values = {
                0: [5, 5, 4, 4, 3],
                1: [4, 4, 4, 2, 5],
                2: [5, 4, 5, 3, 3],
            }[t % 3]
        elif bucket == DISCARD:
            values = {
                0: [1, 2, 3, 4, 5],
                1: [2, 2, 3, 4, 4],
                2: [3, 3, 3, 4, 4],
            }[t % 3]
        else:  # doubtful: four votes splitting 2-2, the fifth judge abstains
            values = {
                0: [5, 4, 2, 1],
                1: [4, 4, 3, 2],
                2: [5, 5, 1, 1],
            }[t % 3]
        scores.append({
            "chain": chain_id,
            "scores": [{"worker": w, "score": s} for w, s in zip(judges, values)],
        })

    return {
        "workers": {
            "phase1": list(PHASE1_WORKERS),
            "phase2": list(PHASE2_WORKERS),
        },
        "selected": selected_argument_ids(),
        "phase1": phase1,
        "phase2_validity": validity,
        "phase2_scores": scores,
    }


# -- artifact files ----------------------------------------------------

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
CORPUS_PATH = os.path.join(FIXTURE_DIR, "corpus_six_topics.csv")
SCRIPT_PATH = os.path.join(FIXTURE_DIR, "funnel_script.json.gz")


def load_script() -> dict:
    with gzip.open(SCRIPT_PATH, "rt", encoding="utf-8") as handle:
        return json.load(handle)


def write_artifacts() -> None:
    os.makedirs(FIXTURE_DIR, exist_ok=True)
    with open(CORPUS_PATH, "w", encoding="utf-8", newline="") as handle:
        handle.write(corpus_csv_text())
    # mtime=0 keeps the gzip byte-stable across regenerations.
    with open(SCRIPT_PATH, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write(json.dumps(build_script(), sort_keys=True).encode("utf-8"))


if __name__ == "__main__":
    write_artifacts()
    script = build_script()
    n_chains = sum(
        sum(1 for r in pair["responses"] if r["feasibility"] == "CanWrite")
        for pair in script["phase1"]
    )
    print(f"corpus rows: {len(corpus_rows())}")
    print(f"phase1 pairs: {len(script['phase1'])}")
    print(f"chains written: {n_chains}")
    print(f"validity tasks: {len(script['phase2_validity'])}")
    print(f"score tasks: {len(script['phase2_scores'])}")
