"""Reliability and dataset statistics.

Krippendorff's alpha is computed from the coincidence matrix of values
paired within items, which handles missing cells and any number of
raters. Dataset statistics summarize a chain set the way the funnel
report tables expect: totals, unique counts, per-premise coverage, and
average component lengths in words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .chains import chain_dedup_key, CausalRelation

NOMINAL = "nominal"
INTERVAL = "interval"

INSUFFICIENT_DATA = "INSUFFICIENT_DATA"


class InsufficientDataError(ValueError):
    code = INSUFFICIENT_DATA


@dataclass(frozen=True)
class ReliabilityReport:
    """Alpha is None when expected disagreement is zero (undefined)."""

    alpha_nominal: float | None
    alpha_interval: float | None
    n_items: int
    n_raters: int
    n_pairable: int


def krippendorff_alpha(
    data: Sequence[Sequence[object]], metric: str = NOMINAL
) -> float | None:
    """Chance-corrected agreement over an item x rater matrix.

    ``data`` holds one row per item; missing cells are None (or NaN).
    Items with fewer than two values are unpairable and ignored. Returns
    None when expected disagreement is zero (all pairable values equal),
    raises InsufficientDataError when fewer than two values are pairable.
    """
    if metric not in (NOMINAL, INTERVAL):
        raise ValueError(f"metric must be {NOMINAL!r} or {INTERVAL!r}, got {metric!r}")

    units: list[list[object]] = []
    for row in data:
        values = [v for v in row if v is not None and not _is_nan(v)]
        if len(values) >= 2:
            units.append(values)
    n_pairable = sum(len(u) for u in units)
    if n_pairable < 2:
        raise InsufficientDataError("fewer than 2 pairable values across all items")

    domain = sorted({v for unit in units for v in unit}, key=lambda v: (str(type(v)), v))
    index = {v: i for i, v in enumerate(domain)}
    size = len(domain)

    coincidence = np.zeros((size, size))
    for unit in units:
        weight = 1.0 / (len(unit) - 1)
        for i, a in enumerate(unit):
            for j, b in enumerate(unit):
                if i != j:
                    coincidence[index[a], index[b]] += weight

    if metric == NOMINAL:
        delta = 1.0 - np.eye(size)
    else:
        values = np.asarray([float(v) for v in domain])
        delta = np.subtract.outer(values, values) ** 2

    n = coincidence.sum()
    marginals = coincidence.sum(axis=1)
    observed = (coincidence * delta).sum() / n
    expected = (np.outer(marginals, marginals) * delta).sum() / (n * (n - 1))
    if expected == 0.0:
        return None
    return float(1.0 - observed / expected)


def _is_nan(value: object) -> bool:
    return isinstance(value, float) and value != value


def votes_to_matrix(
    votes: Iterable[tuple[str, str, object]]
) -> tuple[list[list[object]], list[str], list[str]]:
    """Arrange (item, rater, value) triples into an item x rater matrix.

    Items and raters are ordered lexicographically so the matrix, and
    therefore alpha, is independent of vote arrival order.
    """
    triples = list(votes)
    items = sorted({item for item, _, _ in triples})
    raters = sorted({rater for _, rater, _ in triples})
    item_index = {item: i for i, item in enumerate(items)}
    rater_index = {rater: j for j, rater in enumerate(raters)}
    matrix: list[list[object]] = [[None] * len(raters) for _ in items]
    for item, rater, value in triples:
        matrix[item_index[item]][rater_index[rater]] = value
    return matrix, items, raters


def reliability_report(
    data: Sequence[Sequence[object]], interval_data: Sequence[Sequence[object]] | None = None
) -> ReliabilityReport:
    """Nominal alpha over ``data`` and interval alpha over ``interval_data``
    (or the same matrix when only one is given)."""
    second = data if interval_data is None else interval_data
    n_raters = max((len(row) for row in data), default=0)
    n_pairable = sum(
        len([v for v in row if v is not None and not _is_nan(v)])
        for row in data
        if len([v for v in row if v is not None and not _is_nan(v)]) >= 2
    )
    return ReliabilityReport(
        alpha_nominal=krippendorff_alpha(data, NOMINAL),
        alpha_interval=krippendorff_alpha(second, INTERVAL),
        n_items=len(data),
        n_raters=n_raters,
        n_pairable=n_pairable,
    )


_EDGE_PUNCT_RE = re.compile(r"^\W+|\W+$")


def word_count(text: str) -> int:
    """Whitespace tokens that remain non-empty after stripping edge punctuation."""
    count = 0
    for token in text.split():
        if _EDGE_PUNCT_RE.sub("", token):
            count += 1
    return count


@dataclass(frozen=True)
class DatasetStatistics:
    n_chains: int
    n_unique_chains: int
    pct_premise_with_chain: float
    avg_chains_per_covered_premise: float
    n_premise_zero: int
    n_premise_one: int
    n_premise_multi: int
    avg_outcome_len: float
    avg_premise_len: float
    avg_implicit_len: float


def _chains_per_premise(
    chains: Sequence[dict], argument_ids: Sequence[str]
) -> dict[str, int]:
    counts = {arg_id: 0 for arg_id in argument_ids}
    for record in chains:
        arg_id = record["argument_id"]
        if arg_id not in counts:
            raise ValueError(f"chain references argument {arg_id!r} outside the annotated set")
        counts[arg_id] += 1
    return counts


def dataset_statistics(
    chains: Sequence[dict], arguments: Sequence
) -> DatasetStatistics:
    """Summarize a kept-chain set against the annotated argument set.

    ``chains`` are flat chain records; ``arguments`` provide ids and
    premise texts and define the coverage denominator. Per-premise
    averages are taken over premises with at least one chain.
    """
    premise_text = {arg.id: arg.premise for arg in arguments}
    counts = _chains_per_premise(chains, list(premise_text))
    covered = [arg_id for arg_id, k in counts.items() if k > 0]

    unique = {
        chain_dedup_key(
            record["action"],
            CausalRelation.parse(record["rel_ai"]),
            record["implicit"],
            CausalRelation.parse(record["rel_io"]),
            record["outcome"],
        )
        for record in chains
    }

    n_premises = len(premise_text)
    n_chains = len(chains)
    outcome_lens = [word_count(record["outcome"]) for record in chains]
    implicit_lens = [word_count(record["implicit"]) for record in chains]
    premise_lens = [word_count(premise_text[arg_id]) for arg_id in covered]

    return DatasetStatistics(
        n_chains=n_chains,
        n_unique_chains=len(unique),
        pct_premise_with_chain=(len(covered) / n_premises) if n_premises else 0.0,
        avg_chains_per_covered_premise=(n_chains / len(covered)) if covered else 0.0,
        n_premise_zero=sum(1 for k in counts.values() if k == 0),
        n_premise_one=sum(1 for k in counts.values() if k == 1),
        n_premise_multi=sum(1 for k in counts.values() if k > 1),
        avg_outcome_len=float(np.mean(outcome_lens)) if outcome_lens else 0.0,
        avg_premise_len=float(np.mean(premise_lens)) if premise_lens else 0.0,
        avg_implicit_len=float(np.mean(implicit_lens)) if implicit_lens else 0.0,
    )


def coverage_histogram(
    chains: Sequence[dict], arguments: Sequence, max_k: int = 5
) -> dict[int, int]:
    """Number of claim-premise pairs having k chains, for k = 0..max_k.

    Counts above ``max_k`` are clamped into the top bin (the per-task
    cap makes that bin exact in practice). The histogram's mass equals
    the number of annotated pairs.
    """
    counts = _chains_per_premise(chains, [arg.id for arg in arguments])
    histogram = {k: 0 for k in range(max_k + 1)}
    for k in counts.values():
        histogram[min(k, max_k)] += 1
    return histogram
