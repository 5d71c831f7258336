"""Source-corpus loading and admission filtering.

Input is UTF-8 CSV with header ``id,topic,claim,premise,stance_label,
stance_conf,quality`` (a column mapping in the config adapts corpora
whose native schema differs). Rows are admitted when they carry a
support stance, meet both score thresholds, and belong to an allowed
topic; every rejected row keeps a machine-readable reason so the
admission report can be audited.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

SUPPORT = "Support"
AGAINST = "Against"

# Rejection reasons, checked in this order; a row reports the first failure.
PARSE_ERROR = "PARSE_ERROR"
DUPLICATE_ID = "DUPLICATE_ID"
NOT_SUPPORT_STANCE = "NOT_SUPPORT_STANCE"
QUALITY_BELOW_MIN = "QUALITY_BELOW_MIN"
STANCE_BELOW_MIN = "STANCE_BELOW_MIN"
TOPIC_NOT_ALLOWED = "TOPIC_NOT_ALLOWED"

EXPECTED_COLUMNS = ("id", "topic", "claim", "premise", "stance_label", "stance_conf", "quality")


@dataclass(frozen=True)
class Argument:
    id: str
    topic: str
    claim: str
    premise: str
    stance_label: str
    stance_conf: float
    quality: float


@dataclass(frozen=True)
class FilterPolicy:
    """Admission thresholds. Comparisons are inclusive: rows are rejected
    only when a score is strictly below its minimum."""

    min_quality: float = 0.5
    min_stance: float = 0.6
    topics: frozenset[str] = frozenset()
    stance_required: str = SUPPORT

    def __post_init__(self) -> None:
        for name in ("min_quality", "min_stance"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be within [0, 1], got {value}")
        if not self.topics:
            raise ValueError("topics must be non-empty")


@dataclass(frozen=True)
class RejectedRow:
    row: dict[str, str]
    reason: str
    detail: str = ""


@dataclass
class IngestResult:
    admitted: list[Argument] = field(default_factory=list)
    rejected: list[RejectedRow] = field(default_factory=list)

    def rejection_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for item in self.rejected:
            counts[item.reason] = counts.get(item.reason, 0) + 1
        return dict(sorted(counts.items()))


def _parse_row(raw: dict[str, str]) -> Argument | str:
    """Return a parsed Argument or an error detail string."""
    for column in EXPECTED_COLUMNS:
        if raw.get(column) is None:
            return f"missing column {column!r}"
    row_id = raw["id"].strip()
    claim = raw["claim"].strip()
    premise = raw["premise"].strip()
    if not row_id:
        return "empty id"
    if not claim or not premise:
        return "empty claim or premise"
    stance_label = raw["stance_label"].strip().capitalize()
    if stance_label not in (SUPPORT, AGAINST):
        return f"unknown stance_label {raw['stance_label']!r}"
    try:
        stance_conf = float(raw["stance_conf"])
        quality = float(raw["quality"])
    except ValueError:
        return "non-numeric stance_conf or quality"
    if not (0.0 <= stance_conf <= 1.0 and 0.0 <= quality <= 1.0):
        return "stance_conf/quality out of [0, 1]"
    return Argument(
        id=row_id,
        topic=raw["topic"].strip(),
        claim=claim,
        premise=premise,
        stance_label=stance_label,
        stance_conf=stance_conf,
        quality=quality,
    )


def ingest_rows(rows: list[dict[str, str]], policy: FilterPolicy) -> IngestResult:
    """Partition raw rows into admitted Arguments and rejections."""
    result = IngestResult()
    seen_ids: set[str] = set()
    for raw in rows:
        parsed = _parse_row(raw)
        if isinstance(parsed, str):
            result.rejected.append(RejectedRow(raw, PARSE_ERROR, parsed))
            continue
        if parsed.id in seen_ids:
            result.rejected.append(RejectedRow(raw, DUPLICATE_ID, parsed.id))
            continue
        seen_ids.add(parsed.id)
        if parsed.stance_label != policy.stance_required:
            result.rejected.append(RejectedRow(raw, NOT_SUPPORT_STANCE, parsed.stance_label))
        elif parsed.quality < policy.min_quality:
            result.rejected.append(RejectedRow(raw, QUALITY_BELOW_MIN, str(parsed.quality)))
        elif parsed.stance_conf < policy.min_stance:
            result.rejected.append(RejectedRow(raw, STANCE_BELOW_MIN, str(parsed.stance_conf)))
        elif parsed.topic not in policy.topics:
            result.rejected.append(RejectedRow(raw, TOPIC_NOT_ALLOWED, parsed.topic))
        else:
            result.admitted.append(parsed)
    return result


def ingest(
    source: str | Path | io.TextIOBase,
    policy: FilterPolicy,
    column_map: dict[str, str] | None = None,
) -> IngestResult:
    """Load a CSV corpus file and apply the admission policy.

    ``column_map`` renames source columns to the expected schema, e.g.
    ``{"argument": "premise"}`` maps the corpus's ``argument`` column to
    ``premise``.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as handle:
            return ingest(handle, policy, column_map)
    reader = csv.DictReader(source)
    rows: list[dict[str, str]] = []
    for raw in reader:
        row = {k: v for k, v in raw.items() if k is not None}
        if column_map:
            row = {column_map.get(k, k): v for k, v in row.items()}
        rows.append(row)
    return ingest_rows(rows, policy)


def topic_summary(arguments: list[Argument]) -> list[tuple[str, int]]:
    """Premise counts per topic, topics in lexicographic order."""
    counts: dict[str, int] = {}
    for argument in arguments:
        counts[argument.topic] = counts.get(argument.topic, 0) + 1
    return sorted(counts.items())
