"""Taxonomy-based semantic similarity measures, similarity ensembles, and an
evaluation harness that scores their agreement with human similarity rankings."""

from .datasets import (
    PairSet,
    SurveyResponses,
    TermMapping,
    build_ground_truth,
    load_ground_truth,
    load_mapping,
    load_pairs,
    load_responses,
)
from .ensemble import (
    AGGREGATION_RULES,
    Ensemble,
    ScoreMatrix,
    aggregate,
    enumerate_ensembles,
    make_ensemble,
)
from .errors import (
    DatasetError,
    EnsembleError,
    EvaluationError,
    MeasureError,
    RankingError,
    SemsimError,
    TaxonomyError,
    UndefinedCorrelationError,
)
from .evaluation import (
    CriteriaFlags,
    EvaluationReport,
    GroundTruth,
    evaluate_criteria,
    improvement_over,
    plausibility,
    run_experiment,
)
from .measures import (
    MEASURE_IDS,
    MeasureConfig,
    ScoreVector,
    SimilarityScorer,
    normalize_scores,
)
from .rankstats import RankVector, rank_scores, spearman, spearman_pvalue
from .report import load_report, render_table, write_report
from .taxonomy import Sense, Taxonomy, load_taxonomy

__version__ = "0.1.0"

__all__ = [
    "AGGREGATION_RULES",
    "CriteriaFlags",
    "DatasetError",
    "Ensemble",
    "EnsembleError",
    "EvaluationError",
    "EvaluationReport",
    "GroundTruth",
    "MEASURE_IDS",
    "MeasureConfig",
    "MeasureError",
    "PairSet",
    "RankVector",
    "RankingError",
    "ScoreMatrix",
    "ScoreVector",
    "SemsimError",
    "Sense",
    "SimilarityScorer",
    "SurveyResponses",
    "Taxonomy",
    "TaxonomyError",
    "TermMapping",
    "UndefinedCorrelationError",
    "aggregate",
    "build_ground_truth",
    "enumerate_ensembles",
    "evaluate_criteria",
    "improvement_over",
    "load_ground_truth",
    "load_mapping",
    "load_pairs",
    "load_report",
    "load_responses",
    "load_taxonomy",
    "make_ensemble",
    "normalize_scores",
    "plausibility",
    "rank_scores",
    "render_table",
    "run_experiment",
    "spearman",
    "spearman_pvalue",
    "write_report",
]
