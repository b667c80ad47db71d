"""Score-to-ranking conversion and rank correlation.

Ranking convention used throughout the package: rank 1 is the most similar
pair, and tied scores receive the mean of the rank positions they span
(fractional ranking), so every rank vector of length n sums to n(n+1)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .errors import RankingError, UndefinedCorrelationError

__all__ = ["RankVector", "rank_scores", "spearman", "spearman_pvalue"]


@dataclass(frozen=True)
class RankVector:
    """Fractional ranking aligned with a pair set; rank 1 = most similar."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.values)
        if n == 0:
            raise RankingError("empty rank vector")
        expected = n * (n + 1) / 2.0
        total = math.fsum(self.values)
        if abs(total - expected) > 1e-9 * max(1.0, expected):
            raise RankingError(
                f"not a fractional ranking: ranks sum to {total}, expected {expected}"
            )
        if any(not (1.0 <= v <= n) for v in self.values):
            raise RankingError(f"rank outside [1, {n}]")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]


def _as_array(x: "RankVector | Sequence[float]") -> np.ndarray:
    values = x.values if isinstance(x, RankVector) else x
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise RankingError("expected a one-dimensional vector")
    if not np.all(np.isfinite(arr)):
        raise RankingError("non-finite value in vector")
    return arr


def _fractional_ranks_ascending(a: np.ndarray) -> np.ndarray:
    """Smallest value gets rank 1; ties share the mean of their positions."""
    n = a.size
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(n, dtype=np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def rank_scores(scores: "Sequence[float] | RankVector") -> RankVector:
    """Descending fractional ranking of similarity scores.

    The highest score receives rank 1; tied scores receive the mean of the
    ranks they span. Any strictly increasing transform of the scores leaves
    the result unchanged.
    """
    a = _as_array(scores)
    return RankVector(tuple(float(r) for r in _fractional_ranks_ascending(-a)))


def spearman(x: "RankVector | Sequence[float]", y: "RankVector | Sequence[float]") -> float:
    """Spearman's rho: Pearson correlation of two rank vectors.

    Computing Pearson over fractional ranks is exact under ties; for tie-free
    inputs it coincides with the classical 1 - 6*sum(d^2)/(n(n^2-1)) formula.
    Raises UndefinedCorrelationError when either vector has zero variance
    rather than coercing the result to 0.
    """
    a = _as_array(x)
    b = _as_array(y)
    if a.size != b.size:
        raise RankingError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 3:
        raise RankingError(f"need at least 3 observations, got {a.size}")
    a = a - a.mean()
    b = b - b.mean()
    var_a = float(a @ a)
    var_b = float(b @ b)
    if var_a == 0.0 or var_b == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined: an input vector has zero variance"
        )
    rho = float(a @ b) / math.sqrt(var_a * var_b)
    return max(-1.0, min(1.0, rho))


def spearman_pvalue(rho: float, n: int) -> float:
    """Two-sided p-value for rho via the Student-t approximation.

    Uses t = rho * sqrt((n-2) / (1-rho^2)) with n-2 degrees of freedom; at
    |rho| = 1 the boundary value 0 is returned.
    """
    if n < 4:
        raise RankingError(f"need at least 4 observations for a p-value, got {n}")
    if not -1.0 <= rho <= 1.0:
        raise RankingError(f"correlation {rho} outside [-1, 1]")
    if abs(rho) == 1.0:
        return 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * float(_scipy_stats.t.sf(abs(t), n - 2))
    return min(p, 1.0)
