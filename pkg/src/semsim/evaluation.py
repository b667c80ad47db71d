"""Plausibility scoring against human ground truth and the experiment driver.

A measure's (or ensemble's) cognitive plausibility is the Spearman
correlation between its ranking of the pair set and the human ranking.
``run_experiment`` executes the full procedure: score every measure on every
pair, enumerate the requested ensembles, correlate everything against the
ground truth, and evaluate the four success criteria per ensemble.

A row whose score vector has zero variance has no defined correlation; such
rows are marked degenerate (``rho is None``) and excluded from aggregate
means instead of being coerced to 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .ensemble import (
    AGGREGATION_RULES,
    Ensemble,
    ScoreMatrix,
    aggregate,
    enumerate_ensembles,
)
from .errors import EvaluationError, UndefinedCorrelationError
from .measures import MEASURE_IDS, MeasureConfig, SimilarityScorer
from .rankstats import RankVector, spearman, spearman_pvalue
from .taxonomy import Taxonomy

__all__ = [
    "CriteriaFlags",
    "EnsembleResult",
    "EvaluationReport",
    "GroundTruth",
    "MeasureResult",
    "evaluate_criteria",
    "improvement_over",
    "plausibility",
    "run_experiment",
]

CRITERIA = ("total", "partial", "over_mean", "over_median")


@dataclass(frozen=True)
class GroundTruth:
    """Human-rated pair set: sense-id pairs, scores in [0,1], and their ranking.

    ``labels`` optionally keeps the display terms the pairs came from; the
    ranking normally derives from the scores, but explicitly supplied ranks
    are preserved as given (see ``datasets.load_ground_truth``).
    """

    pairs: tuple[tuple[str, str], ...]
    h_sc: tuple[float, ...]
    h_rk: RankVector
    subject_count: int
    labels: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.pairs)
        if n == 0:
            raise EvaluationError("ground truth has no pairs")
        if len(self.h_sc) != n or len(self.h_rk) != n:
            raise EvaluationError(
                f"misaligned ground truth: {n} pairs, {len(self.h_sc)} scores, "
                f"{len(self.h_rk)} ranks"
            )
        if self.labels is not None and len(self.labels) != n:
            raise EvaluationError("misaligned ground-truth labels")
        for score in self.h_sc:
            if not (0.0 <= score <= 1.0):
                raise EvaluationError(f"human score {score!r} outside [0, 1]")
        if self.subject_count < 1:
            raise EvaluationError("subject count must be positive")

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class CriteriaFlags:
    """The four success criteria of an ensemble versus its members."""

    total: bool
    partial: bool
    over_mean: bool
    over_median: bool

    def value(self, criterion: str) -> bool:
        if criterion not in CRITERIA:
            raise EvaluationError(f"unknown criterion {criterion!r}")
        return getattr(self, criterion)


def _median(values: Sequence[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return ordered[mid]
    return 0.5 * (ordered[mid - 1] + ordered[mid])


def plausibility(r: RankVector, g: GroundTruth) -> tuple[float, float]:
    """Spearman correlation of a ranking with the human ranking, plus p-value."""
    if len(r) != len(g):
        raise EvaluationError(
            f"ranking has {len(r)} entries but ground truth has {len(g)} pairs"
        )
    if len(g) < 4:
        raise EvaluationError(f"too few pairs for plausibility: {len(g)} < 4")
    rho = spearman(r, g.h_rk)
    return rho, spearman_pvalue(rho, len(g))


def evaluate_criteria(rho_e: float, member_rhos: Sequence[float]) -> CriteriaFlags:
    """Strict comparisons of an ensemble's plausibility with its members'."""
    if not member_rhos:
        raise EvaluationError("no member plausibilities to compare against")
    return CriteriaFlags(
        total=all(rho_e > r for r in member_rhos),
        partial=any(rho_e > r for r in member_rhos),
        over_mean=rho_e > math.fsum(member_rhos) / len(member_rhos),
        over_median=rho_e > _median(member_rhos),
    )


def improvement_over(rho_e: float, member_rhos: Sequence[float]) -> tuple[float, float]:
    """Ensemble plausibility minus the mean and the median of its members'."""
    if not member_rhos:
        raise EvaluationError("no member plausibilities to compare against")
    return (
        rho_e - math.fsum(member_rhos) / len(member_rhos),
        rho_e - _median(member_rhos),
    )


@dataclass(frozen=True)
class MeasureResult:
    measure: str
    rho: float | None
    p_value: float | None

    @property
    def degenerate(self) -> bool:
        return self.rho is None


@dataclass(frozen=True)
class EnsembleResult:
    ensemble: Ensemble
    rho: float | None
    p_value: float | None
    flags: CriteriaFlags | None
    delta_mean: float | None
    delta_median: float | None

    @property
    def degenerate(self) -> bool:
        return self.rho is None or self.flags is None

    @property
    def rule(self) -> str:
        return self.ensemble.aggregation

    @property
    def cardinality(self) -> int:
        return self.ensemble.size

    @property
    def label(self) -> str:
        return self.ensemble.label


def _pct(hits: int, total: int) -> float | None:
    return None if total == 0 else 100.0 * hits / total


def _mean_defined(values: Iterable[float | None]) -> float | None:
    defined = [v for v in values if v is not None]
    return None if not defined else math.fsum(defined) / len(defined)


@dataclass(frozen=True)
class EvaluationReport:
    """All per-measure and per-ensemble results of one experiment run.

    Aggregates (success-rate grids, improvements) are recomputed from the row
    data on demand, so a report reconstructed from serialized rows aggregates
    identically to the original.
    """

    measures: tuple[MeasureResult, ...]
    ensembles: tuple[EnsembleResult, ...]
    measure_ids: tuple[str, ...]
    cardinalities: tuple[int, ...]
    rules: tuple[str, ...]
    n_pairs: int
    subject_count: int
    notes: tuple[str, ...] = ()

    def measure_order(self) -> tuple[str, ...]:
        """Measure columns ordered by descending plausibility, degenerate last."""
        def key(m: MeasureResult) -> tuple[int, float, str]:
            return (1, 0.0, m.measure) if m.rho is None else (0, -m.rho, m.measure)

        return tuple(m.measure for m in sorted(self.measures, key=key))

    def _rows(self, rule: str, k: int | None = None) -> list[EnsembleResult]:
        return [
            e
            for e in self.ensembles
            if e.rule == rule and (k is None or e.cardinality == k) and not e.degenerate
        ]

    def counts(self, rule: str) -> dict[int, int]:
        out = {k: 0 for k in self.cardinalities}
        for e in self.ensembles:
            if e.rule == rule:
                out[e.cardinality] += 1
        return out

    def success_by_cardinality(self, rule: str) -> dict[str, dict[int, float | None]]:
        """criterion -> cardinality -> % of that cardinality's ensembles succeeding."""
        out: dict[str, dict[int, float | None]] = {}
        for criterion in CRITERIA:
            per_k: dict[int, float | None] = {}
            for k in self.cardinalities:
                rows = self._rows(rule, k)
                hits = sum(1 for e in rows if e.flags.value(criterion))
                per_k[k] = _pct(hits, len(rows))
            out[criterion] = per_k
        return out

    def success_grid(self, rule: str) -> dict[str, dict[int, dict[str, float | None]]]:
        """criterion -> cardinality -> measure -> % success of ensembles containing it."""
        out: dict[str, dict[int, dict[str, float | None]]] = {}
        for criterion in CRITERIA:
            grid: dict[int, dict[str, float | None]] = {}
            for k in self.cardinalities:
                rows = self._rows(rule, k)
                cells: dict[str, float | None] = {}
                for measure in self.measure_ids:
                    containing = [e for e in rows if measure in e.ensemble.members]
                    hits = sum(1 for e in containing if e.flags.value(criterion))
                    cells[measure] = _pct(hits, len(containing))
                grid[k] = cells
            out[criterion] = grid
        return out

    def success_by_measure(self, rule: str) -> dict[str, dict[str, float | None]]:
        """criterion -> measure -> unweighted mean over cardinalities of grid cells."""
        grid = self.success_grid(rule)
        out: dict[str, dict[str, float | None]] = {}
        for criterion in CRITERIA:
            out[criterion] = {
                measure: _mean_defined(
                    grid[criterion][k][measure] for k in self.cardinalities
                )
                for measure in self.measure_ids
            }
        return out

    def mean_success(self, rule: str) -> dict[str, float | None]:
        """criterion -> unweighted mean over cardinalities of the plain success rates."""
        by_k = self.success_by_cardinality(rule)
        return {
            criterion: _mean_defined(by_k[criterion][k] for k in self.cardinalities)
            for criterion in CRITERIA
        }

    def improvement_by_cardinality(
        self, rule: str
    ) -> dict[int, tuple[float | None, float | None]]:
        """cardinality -> mean (delta over member mean, delta over member median)."""
        out: dict[int, tuple[float | None, float | None]] = {}
        for k in self.cardinalities:
            rows = self._rows(rule, k)
            out[k] = (
                _mean_defined(e.delta_mean for e in rows),
                _mean_defined(e.delta_median for e in rows),
            )
        return out

    def overall_improvement(self, rule: str) -> tuple[float | None, float | None]:
        rows = self._rows(rule)
        return (
            _mean_defined(e.delta_mean for e in rows),
            _mean_defined(e.delta_median for e in rows),
        )

    def partial_violations(self, rule: str) -> int:
        """Ensembles whose plausibility is not above any member's (observed count)."""
        return sum(1 for e in self._rows(rule) if not e.flags.partial)

    def rule_distance(self) -> dict[str, float] | None:
        """Largest per-cardinality success-rate gap between the two rules, per criterion."""
        if len(self.rules) < 2:
            return None
        first = self.success_by_cardinality(self.rules[0])
        second = self.success_by_cardinality(self.rules[1])
        out: dict[str, float] = {}
        for criterion in CRITERIA:
            gaps = [
                abs(first[criterion][k] - second[criterion][k])
                for k in self.cardinalities
                if first[criterion][k] is not None and second[criterion][k] is not None
            ]
            out[criterion] = max(gaps) if gaps else 0.0
        return out


def _correlate(
    ranks: RankVector, g: GroundTruth
) -> tuple[float | None, float | None]:
    try:
        rho = spearman(ranks, g.h_rk)
    except UndefinedCorrelationError:
        return None, None
    return rho, spearman_pvalue(rho, len(g))


def run_experiment(
    taxonomy: Taxonomy,
    config: MeasureConfig | None,
    ground_truth: GroundTruth,
    measures: Sequence[str] | None = None,
    cardinalities: Iterable[int] | None = None,
    aggregations: Sequence[str] = ("mean_rankings",),
) -> EvaluationReport:
    """Score measures, build ensembles, and evaluate everything against the ground truth.

    Steps: (1) score every measure on every pair and derive rankings,
    (2) enumerate all requested ensembles, (3) correlate each measure with
    the human ranking, (4) correlate each ensemble, (5) evaluate the four
    success criteria per ensemble.
    """
    measure_ids = tuple(sorted(measures)) if measures is not None else MEASURE_IDS
    if not measure_ids:
        raise EvaluationError("measure list is empty")
    if len(set(measure_ids)) != len(measure_ids):
        raise EvaluationError("measure list contains duplicates")
    unknown = sorted(set(measure_ids) - set(MEASURE_IDS))
    if unknown:
        raise EvaluationError(
            f"unknown measure(s) {', '.join(unknown)}; "
            f"valid measures: {', '.join(MEASURE_IDS)}"
        )
    rules = tuple(r for r in AGGREGATION_RULES if r in aggregations)
    if len(rules) != len(set(aggregations)):
        bad = sorted(set(aggregations) - set(AGGREGATION_RULES))
        raise EvaluationError(f"unknown aggregation rule(s): {', '.join(bad)}")

    if len(ground_truth) < 4:
        raise EvaluationError(f"too few pairs: {len(ground_truth)} < 4")
    missing = sorted(
        {s for pair in ground_truth.pairs for s in pair if s not in taxonomy}
    )
    if missing:
        raise EvaluationError(f"unresolvable sense id(s): {', '.join(missing)}")

    if cardinalities is None:
        sizes: tuple[int, ...] = tuple(range(2, len(measure_ids) + 1))
    else:
        sizes = tuple(sorted(set(cardinalities)))

    scorer = SimilarityScorer(taxonomy, config)
    matrix = ScoreMatrix(
        scorer.score_pairs(m, ground_truth.pairs) for m in measure_ids
    )

    measure_results = []
    member_rho: dict[str, float | None] = {}
    for m in measure_ids:
        rho, p = _correlate(matrix.ranks(m), ground_truth)
        member_rho[m] = rho
        measure_results.append(MeasureResult(m, rho, p))

    ensemble_results = []
    for rule in rules:
        for e in enumerate_ensembles(measure_ids, sizes, rule):
            rho, p = _correlate(aggregate(e, matrix), ground_truth)
            defined = [r for m in e.members if (r := member_rho[m]) is not None]
            if rho is None or not defined:
                ensemble_results.append(EnsembleResult(e, rho, p, None, None, None))
                continue
            flags = evaluate_criteria(rho, defined)
            delta_mean, delta_median = improvement_over(rho, defined)
            ensemble_results.append(
                EnsembleResult(e, rho, p, flags, delta_mean, delta_median)
            )

    notes = []
    if set(measure_ids) == set(MEASURE_IDS) and 9 in sizes:
        notes.append(
            "Erratum: cardinality 9 over these 10 measures yields C(10,9) = 10 "
            "ensembles (1,013 in total for cardinalities 2-10); the widely "
            "quoted figures of 9 and 1,012 undercount by one."
        )

    return EvaluationReport(
        measures=tuple(measure_results),
        ensembles=tuple(ensemble_results),
        measure_ids=measure_ids,
        cardinalities=sizes,
        rules=rules,
        n_pairs=len(ground_truth),
        subject_count=ground_truth.subject_count,
        notes=tuple(notes),
    )
