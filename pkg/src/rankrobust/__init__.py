"""Ranking-robustness toolkit: how consistently does a ranking system answer
semantically identical queries?

Core pieces: a position-decay ranking distance with missing-item penalties
(`metrics`), query canonicalization into sorted-token keys (`normalize`), a
taxonomy of superficial query differences (`taxonomy`), weekly-log ingestion
and filtering (`ingest`), pair generation and scoring (`pairs`), snapshot
ensembling (`ensemble`), seeded synthetic data (`synth`), and histogram /
trend / correlation reports (`report`).
"""

from .metrics import (
    MetricOutcome,
    RankedList,
    RdsResult,
    kendall_tau,
    pearson,
    rds,
    rds_max,
    rds_raw,
    spearman_rho,
    tau_ap,
    tau_ap_symmetric,
    with_appended_missing,
)
from .normalize import (
    NormalizationConfig,
    TpsKey,
    default_config,
    load_config,
    normalize_query,
    same_tps,
)
from .taxonomy import Label, TaxonomyReport, classify, classify_corpus
from .ingest import (
    ParsedLog,
    QueryRecord,
    WeeklyDataset,
    apply_filters,
    load_datasets,
    parse_log,
    save_datasets,
    split_weeks,
)
from .pairs import (
    QueryPair,
    SimScoreTable,
    evaluate_pairs,
    read_pairs,
    topk_pairs,
    tps_pairs,
    write_evaluations,
    write_pairs,
)
from .ensemble import (
    EnsembleComparison,
    SnapshotSeries,
    ensemble_list,
    series_from_datasets,
    smoothed_vs_single,
)
from .synth import PerturbationSpec, SynthPairSpec, gen_log, gen_pair, perturb
from .report import (
    CorrelationReport,
    HistogramReport,
    TrendReport,
    correlate,
    histogram,
    trend,
)

__version__ = "0.1.0"

__all__ = [
    "MetricOutcome", "RankedList", "RdsResult", "kendall_tau", "pearson",
    "rds", "rds_max", "rds_raw", "spearman_rho", "tau_ap", "tau_ap_symmetric",
    "with_appended_missing",
    "NormalizationConfig", "TpsKey", "default_config", "load_config",
    "normalize_query", "same_tps",
    "Label", "TaxonomyReport", "classify", "classify_corpus",
    "ParsedLog", "QueryRecord", "WeeklyDataset", "apply_filters",
    "load_datasets", "parse_log", "save_datasets", "split_weeks",
    "QueryPair", "SimScoreTable", "evaluate_pairs", "read_pairs",
    "topk_pairs", "tps_pairs", "write_evaluations", "write_pairs",
    "EnsembleComparison", "SnapshotSeries", "ensemble_list",
    "series_from_datasets", "smoothed_vs_single",
    "PerturbationSpec", "SynthPairSpec", "gen_log", "gen_pair", "perturb",
    "CorrelationReport", "HistogramReport", "TrendReport", "correlate",
    "histogram", "trend",
    "__version__",
]
