"""Majority-vote aggregation and the two-phase filtering funnel.

Three vote kinds are aggregated: the feasibility question (can a hidden
reasoning be written for this pair?), the outcome-validity judgement
(does the outcome follow from the supporting statement?), and the 1-5
quality scores. Each aggregation yields Keep, Discard, or Doubtful;
Doubtful means no decision rule reached its threshold. Doubtful items
are retained in storage with their verdict so the funnel stays
auditable; only export excludes them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum


class Feasibility(str, Enum):
    CAN_WRITE = "CanWrite"
    CANNOT_WRITE = "CannotWrite"
    UNSURE = "Unsure"


class Decision(str, Enum):
    KEEP = "Keep"
    DISCARD = "Discard"
    DOUBTFUL = "Doubtful"


class AggregationError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


EMPTY_VOTES = "EMPTY_VOTES"
SCORE_OUT_OF_RANGE = "SCORE_OUT_OF_RANGE"
DANGLING_REFERENCE = "DANGLING_REFERENCE"

GOOD_SCORES = frozenset({4, 5})
BAD_SCORES = frozenset({1, 2, 3})


@dataclass(frozen=True)
class AggregationVerdict:
    subject: str
    decision: Decision
    tally: dict[str, int]
    rule: str


def _tally(votes: list) -> dict[str, int]:
    counts = Counter(str(getattr(v, "value", v)) for v in votes)
    return dict(sorted(counts.items()))


def aggregate_feasibility(
    votes: list[Feasibility], subject: str = "", threshold: int = 3
) -> AggregationVerdict:
    """Keep when enough workers say they can write; discard on a clear
    cannot-write majority block; doubtful otherwise.

    Discard requires the cannot/unsure block to reach the threshold with
    CannotWrite as the strictly largest class, so an unsure-heavy split
    stays doubtful.
    """
    if not votes:
        raise AggregationError(EMPTY_VOTES, "feasibility aggregation needs at least one vote")
    if len(votes) > 5:
        raise AggregationError(SCORE_OUT_OF_RANGE, "at most 5 votes per task")
    counts = Counter(votes)
    can = counts[Feasibility.CAN_WRITE]
    cannot = counts[Feasibility.CANNOT_WRITE]
    unsure = counts[Feasibility.UNSURE]
    if can >= threshold:
        decision, rule = Decision.KEEP, f"can_write>={threshold}"
    elif cannot + unsure >= threshold and cannot > can and cannot > unsure:
        decision, rule = Decision.DISCARD, f"cannot_block>={threshold}_cannot_plurality"
    else:
        decision, rule = Decision.DOUBTFUL, "no_rule_reached_threshold"
    return AggregationVerdict(subject, decision, _tally(votes), rule)


def aggregate_outcome_validity(
    votes: list[bool], subject: str = "", threshold: int = 3
) -> AggregationVerdict:
    """Majority vote on whether the outcome follows from the supporting
    statement. With five votes one side always reaches three, so
    Doubtful can only arise from missing votes."""
    if not votes:
        raise AggregationError(EMPTY_VOTES, "validity aggregation needs at least one vote")
    if len(votes) > 5:
        raise AggregationError(SCORE_OUT_OF_RANGE, "at most 5 votes per task")
    yes = sum(1 for v in votes if v)
    no = len(votes) - yes
    if yes >= threshold:
        decision, rule = Decision.KEEP, f"yes>={threshold}"
    elif no >= threshold:
        decision, rule = Decision.DISCARD, f"no>={threshold}"
    else:
        decision, rule = Decision.DOUBTFUL, "no_side_reached_threshold"
    tally = dict(sorted(Counter("Yes" if v else "No" for v in votes).items()))
    return AggregationVerdict(subject, decision, tally, rule)


def aggregate_scores(
    scores: list[int],
    subject: str = "",
    threshold: int = 3,
    mode: str = "bipartition",
) -> AggregationVerdict:
    """Aggregate 1-5 quality scores.

    The default ``bipartition`` rule keeps a chain when at least
    ``threshold`` scores fall in {4, 5} and discards when at least
    ``threshold`` fall in {1, 2, 3}; with five votes one side always
    wins, so Doubtful needs missing votes. The alternate ``mode`` rule
    takes the most frequent score (Keep when the mode is 4 or 5), and
    returns Doubtful on a tied mode.
    """
    if not scores:
        raise AggregationError(EMPTY_VOTES, "score aggregation needs at least one vote")
    if len(scores) > 5:
        raise AggregationError(SCORE_OUT_OF_RANGE, "at most 5 votes per task")
    for score in scores:
        if score not in (1, 2, 3, 4, 5):
            raise AggregationError(SCORE_OUT_OF_RANGE, f"score {score!r} outside 1..5")
    tally = {str(k): v for k, v in sorted(Counter(scores).items())}
    if mode == "bipartition":
        good = sum(1 for s in scores if s in GOOD_SCORES)
        bad = len(scores) - good
        if good >= threshold:
            decision, rule = Decision.KEEP, f"scores_4_5>={threshold}"
        elif bad >= threshold:
            decision, rule = Decision.DISCARD, f"scores_1_3>={threshold}"
        else:
            decision, rule = Decision.DOUBTFUL, "no_side_reached_threshold"
    elif mode == "mode":
        counts = Counter(scores)
        best = max(counts.values())
        modal = [s for s, c in counts.items() if c == best]
        if len(modal) > 1:
            decision, rule = Decision.DOUBTFUL, "tied_mode"
        elif modal[0] in GOOD_SCORES:
            decision, rule = Decision.KEEP, f"mode={modal[0]}"
        else:
            decision, rule = Decision.DISCARD, f"mode={modal[0]}"
    else:
        raise ValueError(f"unknown score aggregation mode {mode!r}")
    return AggregationVerdict(subject, decision, tally, rule)


# Terminal buckets a chain can land in after the full funnel.
BUCKET_KEEP = "keep"
BUCKET_DISCARD = "discard"
BUCKET_DOUBTFUL = "doubtful"
BUCKET_INVALID_OUTCOME = "invalid_outcome"


@dataclass
class FunnelReport:
    """Stage counts of the two-phase pipeline plus per-item verdicts."""

    n_pairs: int = 0
    n_pairs_feasible: int = 0
    n_chains: int = 0
    n_outcome_invalid: int = 0
    n_outcome_valid: int = 0
    n_keep: int = 0
    n_discard: int = 0
    n_doubtful: int = 0
    pair_feasibility: dict[str, AggregationVerdict] = field(default_factory=dict)
    chain_buckets: dict[str, str] = field(default_factory=dict)
    chain_validity: dict[str, AggregationVerdict] = field(default_factory=dict)
    chain_scores: dict[str, AggregationVerdict] = field(default_factory=dict)

    def to_rows(self) -> list[tuple[str, int]]:
        """Row-per-stage serialization used by the report CLI."""
        return [
            ("claim-premise pairs annotated", self.n_pairs),
            ("pairs with majority feasibility", self.n_pairs_feasible),
            ("implicit reasonings collected", self.n_chains),
            ("implicit reasonings with invalid outcome", self.n_outcome_invalid),
            ("implicit reasonings with valid outcome", self.n_outcome_valid),
            ("kept after quality scoring", self.n_keep),
            ("discarded after quality scoring", self.n_discard),
            ("doubtful (no majority score)", self.n_doubtful),
        ]


def run_funnel(
    feasibility_votes: dict[str, list[Feasibility]],
    chains_by_pair: dict[str, list[str]],
    validity_votes: dict[str, list[bool]],
    score_votes: dict[str, list[int]],
    feasibility_threshold: int = 3,
    validity_threshold: int = 3,
    score_threshold: int = 3,
    score_mode: str = "bipartition",
) -> FunnelReport:
    """Run the full aggregation funnel over a frozen vote snapshot.

    ``chains_by_pair`` maps argument id -> chain ids collected for that
    pair. Chains on pairs without a feasibility Keep never enter the
    funnel. Every surviving chain lands in exactly one terminal bucket.
    A chain with no votes at a stage is Doubtful, not an error: the
    snapshot may be frozen mid-collection.
    """
    known_chains = {cid for ids in chains_by_pair.values() for cid in ids}
    for cid in list(validity_votes) + list(score_votes):
        if cid not in known_chains:
            raise AggregationError(DANGLING_REFERENCE, f"votes reference unknown chain {cid!r}")

    report = FunnelReport(n_pairs=len(feasibility_votes))
    for pair_id in sorted(feasibility_votes):
        verdict = aggregate_feasibility(
            feasibility_votes[pair_id], subject=pair_id, threshold=feasibility_threshold
        )
        report.pair_feasibility[pair_id] = verdict
        if verdict.decision is not Decision.KEEP:
            continue
        report.n_pairs_feasible += 1
        for chain_id in chains_by_pair.get(pair_id, []):
            report.n_chains += 1
            collected = validity_votes.get(chain_id, [])
            if not collected:
                report.n_doubtful += 1
                report.chain_buckets[chain_id] = BUCKET_DOUBTFUL
                continue
            validity = aggregate_outcome_validity(
                collected, subject=chain_id, threshold=validity_threshold
            )
            report.chain_validity[chain_id] = validity
            if validity.decision is Decision.DISCARD:
                report.n_outcome_invalid += 1
                report.chain_buckets[chain_id] = BUCKET_INVALID_OUTCOME
                continue
            if validity.decision is Decision.DOUBTFUL:
                # only reachable with missing votes; no majority either way
                report.n_doubtful += 1
                report.chain_buckets[chain_id] = BUCKET_DOUBTFUL
                continue
            report.n_outcome_valid += 1
            judged = score_votes.get(chain_id, [])
            if not judged:
                report.n_doubtful += 1
                report.chain_buckets[chain_id] = BUCKET_DOUBTFUL
                continue
            scores = aggregate_scores(
                judged,
                subject=chain_id,
                threshold=score_threshold,
                mode=score_mode,
            )
            report.chain_scores[chain_id] = scores
            if scores.decision is Decision.KEEP:
                report.n_keep += 1
                report.chain_buckets[chain_id] = BUCKET_KEEP
            elif scores.decision is Decision.DISCARD:
                report.n_discard += 1
                report.chain_buckets[chain_id] = BUCKET_DISCARD
            else:
                report.n_doubtful += 1
                report.chain_buckets[chain_id] = BUCKET_DOUBTFUL
    return report
