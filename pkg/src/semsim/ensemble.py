"""Similarity ensembles: construction, aggregation, and exhaustive enumeration.

An ensemble is a set of distinct measures whose per-pair outputs are fused
into a single ranking, either by averaging min-max-normalized scores and
ranking the means (``mean_scores``) or by averaging the members' fractional
rankings and re-ranking the means (``mean_rankings``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import EnsembleError
from .measures import MEASURE_IDS, ScoreVector, normalize_scores
from .rankstats import RankVector, rank_scores

__all__ = [
    "AGGREGATION_RULES",
    "RULE_TAGS",
    "Ensemble",
    "ScoreMatrix",
    "aggregate",
    "enumerate_ensembles",
    "make_ensemble",
]

AGGREGATION_RULES = ("mean_scores", "mean_rankings")

#: Short tags used in reports and serialized ensemble labels.
RULE_TAGS = {"mean_scores": "A_s", "mean_rankings": "A_r"}


@dataclass(frozen=True)
class Ensemble:
    """Canonically ordered set of distinct measure ids plus an aggregation rule."""

    members: tuple[str, ...]
    aggregation: str = "mean_rankings"

    def __post_init__(self) -> None:
        if not self.members:
            raise EnsembleError("empty member list")
        if self.aggregation not in AGGREGATION_RULES:
            raise EnsembleError(
                f"unknown aggregation rule {self.aggregation!r}; "
                f"valid rules: {', '.join(AGGREGATION_RULES)}"
            )
        unknown = [m for m in self.members if m not in MEASURE_IDS]
        if unknown:
            raise EnsembleError(
                f"unknown measure(s) {', '.join(sorted(set(unknown)))}; "
                f"valid measures: {', '.join(MEASURE_IDS)}"
            )
        if len(set(self.members)) != len(self.members):
            dupes = sorted({m for m in self.members if self.members.count(m) > 1})
            raise EnsembleError(f"duplicate member(s): {', '.join(dupes)}")
        if self.members != tuple(sorted(self.members)):
            raise EnsembleError("members must be in canonical (sorted) order")

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def label(self) -> str:
        """Serialized form, e.g. ``A_r:jcn+lesk``."""
        return f"{RULE_TAGS[self.aggregation]}:{'+'.join(self.members)}"


def make_ensemble(members: Iterable[str], aggregation: str = "mean_rankings") -> Ensemble:
    """Build an ensemble, rejecting duplicates and canonicalizing member order."""
    member_list = list(members)
    if len(set(member_list)) != len(member_list):
        dupes = sorted({m for m in member_list if member_list.count(m) > 1})
        raise EnsembleError(f"duplicate member(s): {', '.join(dupes)}")
    return Ensemble(tuple(sorted(member_list)), aggregation)


class ScoreMatrix:
    """Per-measure raw scores, normalized scores, and rankings over one pair set."""

    def __init__(self, scores: Iterable[ScoreVector]):
        self._raw: dict[str, ScoreVector] = {}
        for vector in scores:
            if vector.measure in self._raw:
                raise EnsembleError(f"duplicate row for measure {vector.measure!r}")
            self._raw[vector.measure] = vector
        if not self._raw:
            raise EnsembleError("empty score matrix")
        lengths = {len(v) for v in self._raw.values()}
        if len(lengths) != 1:
            raise EnsembleError(f"rows have mismatched lengths: {sorted(lengths)}")
        self.n_pairs = lengths.pop()
        self.measures = tuple(sorted(self._raw))
        self._normalized = {m: normalize_scores(v) for m, v in self._raw.items()}
        self._ranks = {m: rank_scores(v.values) for m, v in self._raw.items()}

    def raw(self, measure: str) -> ScoreVector:
        self._require(measure)
        return self._raw[measure]

    def normalized(self, measure: str) -> ScoreVector:
        self._require(measure)
        return self._normalized[measure]

    def ranks(self, measure: str) -> RankVector:
        self._require(measure)
        return self._ranks[measure]

    def _require(self, measure: str) -> None:
        if measure not in self._raw:
            raise EnsembleError(f"no score row for measure {measure!r}")


def aggregate(ensemble: Ensemble, matrix: ScoreMatrix) -> RankVector:
    """The ensemble's fused ranking over the matrix's pair set.

    ``mean_scores`` averages the members' normalized scores per pair and
    ranks the means (high mean = rank 1); ``mean_rankings`` averages the
    members' fractional ranks per pair and re-ranks the means (low mean
    rank = rank 1).
    """
    for member in ensemble.members:
        matrix._require(member)
    n = matrix.n_pairs
    k = ensemble.size
    if ensemble.aggregation == "mean_scores":
        means = [
            math.fsum(matrix.normalized(m).values[i] for m in ensemble.members) / k
            for i in range(n)
        ]
        return rank_scores(means)
    means = [
        math.fsum(matrix.ranks(m).values[i] for m in ensemble.members) / k
        for i in range(n)
    ]
    # re-rank ascending: the lowest mean rank is the most similar pair
    return rank_scores([-x for x in means])


def enumerate_ensembles(
    measures: Sequence[str],
    cardinalities: Iterable[int],
    aggregation: str = "mean_rankings",
) -> list[Ensemble]:
    """Every distinct member set of each requested cardinality, in canonical order."""
    pool = sorted(set(measures))
    if len(pool) != len(list(measures)):
        raise EnsembleError("measure list contains duplicates")
    unknown = [m for m in pool if m not in MEASURE_IDS]
    if unknown:
        raise EnsembleError(f"unknown measure(s): {', '.join(unknown)}")
    sizes = sorted(set(cardinalities))
    for k in sizes:
        if not 2 <= k <= len(pool):
            raise EnsembleError(
                f"cardinality {k} out of range [2, {len(pool)}]"
            )
    return [
        Ensemble(members, aggregation)
        for k in sizes
        for members in combinations(pool, k)
    ]
