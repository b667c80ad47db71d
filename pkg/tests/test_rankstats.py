from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semsim import (
    RankVector,
    RankingError,
    UndefinedCorrelationError,
    rank_scores,
    spearman,
    spearman_pvalue,
)

finite_scores = st.lists(
    st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=40,
)


class TestRankScores:
    def test_worked_example(self):
        assert tuple(rank_scores([0.45, 0.13, 0.91])) == (2.0, 3.0, 1.0)

    def test_full_tie(self):
        assert tuple(rank_scores([3.0, 3.0, 3.0, 3.0])) == (2.5, 2.5, 2.5, 2.5)

    def test_partial_ties(self):
        assert tuple(rank_scores([0.9, 0.9, 0.38, 0.44, 0.31])) == (1.5, 1.5, 4.0, 3.0, 5.0)

    @given(finite_scores)
    def test_fractional_ranking_invariant(self, scores):
        ranks = rank_scores(scores)
        n = len(scores)
        assert math.fsum(ranks) == pytest.approx(n * (n + 1) / 2)
        assert all(1 <= r <= n for r in ranks)

    @given(st.lists(st.integers(min_value=0, max_value=10**6), min_size=1, max_size=40))
    def test_invariant_under_strictly_increasing_transform(self, scores):
        # integer scores keep the affine map exact in floating point
        transformed = [3.0 * s + 1.0 for s in scores]
        assert tuple(rank_scores(scores)) == tuple(rank_scores(transformed))
        assert tuple(rank_scores(scores)) == tuple(
            rank_scores([math.sqrt(s) for s in scores])
        )

    def test_rejects_non_finite(self):
        with pytest.raises(RankingError):
            rank_scores([1.0, float("nan")])


class TestRankVector:
    def test_valid(self):
        RankVector((2.0, 3.0, 1.0))

    def test_rejects_bad_sum(self):
        with pytest.raises(RankingError, match="fractional"):
            RankVector((1.0, 1.0, 1.0))

    def test_rejects_out_of_range(self):
        with pytest.raises(RankingError):
            RankVector((0.5, 2.5, 3.0))

    def test_rejects_empty(self):
        with pytest.raises(RankingError):
            RankVector(())


class TestSpearman:
    def test_identical(self):
        x = rank_scores([5, 4, 3, 2, 1])
        assert spearman(x, x) == 1.0

    def test_reversed(self):
        x = rank_scores([5, 4, 3, 2, 1])
        y = rank_scores([1, 2, 3, 4, 5])
        assert spearman(x, y) == -1.0

    def test_classical_d2_example(self):
        assert spearman([1, 2, 3, 4, 5], [2, 1, 4, 3, 5]) == pytest.approx(0.8, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(RankingError, match="length"):
            spearman([1, 2, 3], [1, 2, 3, 4])

    def test_too_short(self):
        with pytest.raises(RankingError, match="at least 3"):
            spearman([1, 2], [2, 1])

    def test_zero_variance_is_an_error_not_zero(self):
        with pytest.raises(UndefinedCorrelationError):
            spearman([2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    @given(st.permutations(list(range(1, 8))), st.permutations(list(range(1, 8))))
    def test_symmetry(self, x, y):
        assert spearman(x, y) == pytest.approx(spearman(y, x), abs=1e-12)

    @given(
        st.permutations(list(range(1, 9))),
        st.permutations(list(range(1, 9))),
        st.permutations(list(range(8))),
    )
    def test_invariant_under_common_permutation(self, x, y, perm):
        xp = [x[i] for i in perm]
        yp = [y[i] for i in perm]
        assert spearman(xp, yp) == pytest.approx(spearman(x, y), abs=1e-12)

    @given(st.permutations(list(range(1, 8))), st.permutations(list(range(1, 8))))
    def test_direction_flip(self, x, y):
        n = len(x)
        flipped_x = [n + 1 - v for v in x]
        flipped_y = [n + 1 - v for v in y]
        rho = spearman(x, y)
        # flipping both conventions preserves rho; flipping one negates it
        assert spearman(flipped_x, flipped_y) == pytest.approx(rho, abs=1e-12)
        assert spearman(flipped_x, y) == pytest.approx(-rho, abs=1e-12)

    def test_exact_under_ties_matches_pearson_over_ranks(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = rng.integers(4, 15)
            x = rng.integers(0, 4, n).astype(float)  # heavy ties
            y = rng.integers(0, 4, n).astype(float)
            rx, ry = rank_scores(x), rank_scores(y)
            try:
                ours = spearman(rx, ry)
            except UndefinedCorrelationError:
                assert len(set(x.tolist())) == 1 or len(set(y.tolist())) == 1
                continue
            oracle = np.corrcoef(list(rx), list(ry))[0, 1]
            assert ours == pytest.approx(oracle, abs=1e-12)


class TestSpearmanPvalue:
    def test_null_is_one(self):
        assert spearman_pvalue(0.0, 10) == 1.0
        assert spearman_pvalue(0.0, 50) == 1.0

    def test_worked_example(self):
        # t = 0.8 * sqrt(3 / 0.36) = 2.309; two-sided tail at 3 dof
        assert spearman_pvalue(0.8, 5) == pytest.approx(0.104, abs=5e-4)

    def test_large_sample_significance(self):
        assert spearman_pvalue(0.737, 50) < 0.01

    def test_boundary(self):
        assert spearman_pvalue(1.0, 10) == 0.0
        assert spearman_pvalue(-1.0, 10) == 0.0

    def test_too_small_n(self):
        with pytest.raises(RankingError):
            spearman_pvalue(0.5, 3)

    def test_out_of_range_rho(self):
        with pytest.raises(RankingError):
            spearman_pvalue(1.5, 10)

    @given(
        st.floats(min_value=-0.999, max_value=0.999),
        st.integers(min_value=4, max_value=200),
    )
    def test_in_unit_interval_and_symmetric(self, rho, n):
        p = spearman_pvalue(rho, n)
        assert 0.0 < p <= 1.0
        assert spearman_pvalue(-rho, n) == pytest.approx(p, abs=1e-12)
