"""Declarative service configuration.

One YAML file holds every tunable constant: filter thresholds,
qualification gates, task capacity, aggregation thresholds, payment
amounts (integer cents), and the storage path. Validation failures name
the offending field by path so operators can fix the file directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any

import yaml

from .ingestion import SUPPORT, AGAINST


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.field_path = path


@dataclass(frozen=True)
class IngestionConfig:
    min_quality: float = 0.5
    min_stance: float = 0.6
    stance_required: str = SUPPORT
    topics: tuple[str, ...] = ()  # empty = not yet declared; ingestion refuses to run


@dataclass(frozen=True)
class QualificationConfig:
    min_acceptance_rate: float = 0.98
    min_approved_tasks: int = 5000
    min_quiz_score: float = 0.75


@dataclass(frozen=True)
class AggregationConfig:
    feasibility_threshold: int = 3
    validity_threshold: int = 3
    score_threshold: int = 3
    score_mode: str = "bipartition"  # or "mode": majority score value, 1-3 discard / 4-5 keep


@dataclass(frozen=True)
class PaymentConfig:
    phase1_base_cents: int = 50
    phase1_bonus_cents: int = 25
    phase2_base_cents: int = 40


@dataclass(frozen=True)
class ServiceConfig:
    storage_path: str = "causeway.db"
    synchronous: str = "full"
    task_capacity: int = 5
    ingestion: IngestionConfig = field(default_factory=IngestionConfig)
    qualification: QualificationConfig = field(default_factory=QualificationConfig)
    aggregation: AggregationConfig = field(default_factory=AggregationConfig)
    payments: PaymentConfig = field(default_factory=PaymentConfig)


def _require_unit_interval(path: str, value: Any) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise ConfigError(path, f"must be within [0, 1], got {value}")
    return float(value)


def _require_nonneg_int(path: str, value: Any) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ConfigError(path, f"expected a non-negative integer, got {value!r}")
    return value


def _require_positive_int(path: str, value: Any) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(path, f"expected a positive integer, got {value!r}")
    return value


def _require_choice(path: str, value: Any, choices: tuple[str, ...]) -> str:
    if value not in choices:
        raise ConfigError(path, f"must be one of {list(choices)}, got {value!r}")
    return value


def _require_str(path: str, value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise ConfigError(path, f"expected a non-empty string, got {value!r}")
    return value


def _section(raw: dict, name: str) -> dict:
    value = raw.get(name, {})
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise ConfigError(name, f"expected a mapping, got {value!r}")
    return value


def _reject_unknown(path: str, raw: dict, allowed: set[str]) -> None:
    unknown = set(raw) - allowed
    if unknown:
        key = sorted(unknown)[0]
        prefix = f"{path}.{key}" if path else key
        raise ConfigError(prefix, "unknown field")


def parse_config(raw: dict) -> ServiceConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", f"expected a mapping, got {type(raw).__name__}")
    _reject_unknown(
        "", raw,
        {"storage_path", "synchronous", "task_capacity", "ingestion",
         "qualification", "aggregation", "payments"},
    )

    ing = _section(raw, "ingestion")
    _reject_unknown("ingestion", ing, {f.name for f in fields(IngestionConfig)})
    topics = ing.get("topics", ())
    if topics is None:
        topics = ()
    if not isinstance(topics, (list, tuple)) or any(not isinstance(t, str) for t in topics):
        raise ConfigError("ingestion.topics", f"expected a list of strings, got {topics!r}")
    ingestion = IngestionConfig(
        min_quality=_require_unit_interval("ingestion.min_quality", ing.get("min_quality", 0.5)),
        min_stance=_require_unit_interval("ingestion.min_stance", ing.get("min_stance", 0.6)),
        stance_required=_require_choice(
            "ingestion.stance_required", ing.get("stance_required", SUPPORT), (SUPPORT, AGAINST)
        ),
        topics=tuple(topics),
    )

    qual = _section(raw, "qualification")
    _reject_unknown("qualification", qual, {f.name for f in fields(QualificationConfig)})
    qualification = QualificationConfig(
        min_acceptance_rate=_require_unit_interval(
            "qualification.min_acceptance_rate", qual.get("min_acceptance_rate", 0.98)
        ),
        min_approved_tasks=_require_nonneg_int(
            "qualification.min_approved_tasks", qual.get("min_approved_tasks", 5000)
        ),
        min_quiz_score=_require_unit_interval(
            "qualification.min_quiz_score", qual.get("min_quiz_score", 0.75)
        ),
    )

    agg = _section(raw, "aggregation")
    _reject_unknown("aggregation", agg, {f.name for f in fields(AggregationConfig)})
    aggregation = AggregationConfig(
        feasibility_threshold=_require_positive_int(
            "aggregation.feasibility_threshold", agg.get("feasibility_threshold", 3)
        ),
        validity_threshold=_require_positive_int(
            "aggregation.validity_threshold", agg.get("validity_threshold", 3)
        ),
        score_threshold=_require_positive_int(
            "aggregation.score_threshold", agg.get("score_threshold", 3)
        ),
        score_mode=_require_choice(
            "aggregation.score_mode", agg.get("score_mode", "bipartition"), ("bipartition", "mode")
        ),
    )

    pay = _section(raw, "payments")
    _reject_unknown("payments", pay, {f.name for f in fields(PaymentConfig)})
    payments = PaymentConfig(
        phase1_base_cents=_require_nonneg_int(
            "payments.phase1_base_cents", pay.get("phase1_base_cents", 50)
        ),
        phase1_bonus_cents=_require_nonneg_int(
            "payments.phase1_bonus_cents", pay.get("phase1_bonus_cents", 25)
        ),
        phase2_base_cents=_require_nonneg_int(
            "payments.phase2_base_cents", pay.get("phase2_base_cents", 40)
        ),
    )

    return ServiceConfig(
        storage_path=_require_str("storage_path", raw.get("storage_path", "causeway.db")),
        synchronous=_require_choice("synchronous", raw.get("synchronous", "full"), ("full", "normal")),
        task_capacity=_require_positive_int("task_capacity", raw.get("task_capacity", 5)),
        ingestion=ingestion,
        qualification=qualification,
        aggregation=aggregation,
        payments=payments,
    )


def load_config(path: str) -> ServiceConfig:
    with open(path, encoding="utf-8") as handle:
        raw = yaml.safe_load(handle)
    if raw is None:
        raw = {}
    return parse_config(raw)
