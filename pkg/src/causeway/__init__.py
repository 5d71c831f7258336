"""Causeway: collect, validate, filter, and analyze implicit reasoning
annotations over argumentative text.

The library layers are importable on their own (chains, extraction,
ingestion, aggregation, metrics); the platform binds them to a store
and the HTTP/CLI surfaces.
"""

from .aggregation import (
    AggregationError,
    AggregationVerdict,
    Decision,
    Feasibility,
    FunnelReport,
    aggregate_feasibility,
    aggregate_outcome_validity,
    aggregate_scores,
    run_funnel,
)
from .chains import (
    ActionEntity,
    CausalRelation,
    ImplicitCausalKnowledge,
    OutcomeEntity,
    ReasoningChain,
    Violation,
    chain_dedup_key,
    chain_from_record,
    chain_to_record,
    compose,
    net_relation,
    validate_chain,
)
from .config import ConfigError, ServiceConfig, load_config, parse_config
from .extraction import ExtractionRule, extract_action, gerundize, load_rules
from .ingestion import Argument, FilterPolicy, IngestResult, ingest, ingest_rows, topic_summary
from .metrics import (
    DatasetStatistics,
    InsufficientDataError,
    ReliabilityReport,
    coverage_histogram,
    dataset_statistics,
    krippendorff_alpha,
    reliability_report,
    votes_to_matrix,
)
from .platform import Platform, PlatformError
from .store import Store
from .workflow import Workflow, WorkflowError

__version__ = "0.1.0"

__all__ = [
    "ActionEntity",
    "AggregationError",
    "AggregationVerdict",
    "Argument",
    "CausalRelation",
    "ConfigError",
    "DatasetStatistics",
    "Decision",
    "ExtractionRule",
    "Feasibility",
    "FilterPolicy",
    "FunnelReport",
    "ImplicitCausalKnowledge",
    "IngestResult",
    "InsufficientDataError",
    "OutcomeEntity",
    "Platform",
    "PlatformError",
    "ReasoningChain",
    "ReliabilityReport",
    "ServiceConfig",
    "Store",
    "Violation",
    "Workflow",
    "WorkflowError",
    "aggregate_feasibility",
    "aggregate_outcome_validity",
    "aggregate_scores",
    "chain_dedup_key",
    "chain_from_record",
    "chain_to_record",
    "compose",
    "coverage_histogram",
    "dataset_statistics",
    "extract_action",
    "gerundize",
    "ingest",
    "ingest_rows",
    "krippendorff_alpha",
    "load_config",
    "load_rules",
    "net_relation",
    "parse_config",
    "reliability_report",
    "run_funnel",
    "topic_summary",
    "validate_chain",
    "votes_to_matrix",
]
