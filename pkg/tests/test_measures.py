from __future__ import annotations

import math
import re
from itertools import combinations_with_replacement

import numpy as np
import pytest
from hypothesis import given, strategies as st

from semsim import (
    MEASURE_IDS,
    MeasureConfig,
    MeasureError,
    ScoreVector,
    Sense,
    SimilarityScorer,
    Taxonomy,
    normalize_scores,
    rank_scores,
)
from semsim.measures import (
    CooccurrenceModel,
    sim_edge_family,
    sim_hso,
    sim_ic_family,
    sim_lesk,
    sim_vector_family,
)

from .conftest import BUILDING, CANAL, ENTITY, HOTEL, MICRO_SENSES, MOTEL, RIVER, WATERWAY

NO_STOPWORDS = frozenset()


class TestEdgeFamily:
    def test_path_example(self, micro_taxonomy):
        assert sim_edge_family("path", micro_taxonomy, RIVER, CANAL) == pytest.approx(1 / 3)

    def test_wup_identity(self, micro_taxonomy):
        assert sim_edge_family("wup", micro_taxonomy, RIVER, RIVER) == 1.0

    def test_wup_example(self, micro_taxonomy):
        assert sim_edge_family("wup", micro_taxonomy, RIVER, CANAL) == pytest.approx(2 / 3)

    def test_lch_example(self, micro_taxonomy):
        assert sim_edge_family("lch", micro_taxonomy, RIVER, CANAL) == pytest.approx(
            math.log(2), abs=1e-9
        )

    def test_pos_mismatch(self):
        t = Taxonomy(
            [
                Sense(id="thing#n#1", lemmas=("thing",), gloss="g"),
                Sense(id="run#v#1", lemmas=("run",), gloss="g"),
            ]
        )
        with pytest.raises(MeasureError, match="pos"):
            sim_edge_family("path", t, "thing#n#1", "run#v#1")


class TestIcFamily:
    def test_res_root_lcs_is_zero(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("res", micro_taxonomy, ic, RIVER, HOTEL) == 0.0

    def test_res_example(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("res", micro_taxonomy, ic, RIVER, CANAL) == pytest.approx(
            -math.log(3 / 7), abs=1e-9
        )

    def test_lin_example(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("lin", micro_taxonomy, ic, RIVER, CANAL) == pytest.approx(
            0.4354, abs=1e-4
        )

    def test_jcn_example(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("jcn", micro_taxonomy, ic, RIVER, CANAL) == pytest.approx(
            0.4551, abs=1e-4
        )

    def test_jcn_capped_at_identity(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("jcn", micro_taxonomy, ic, RIVER, RIVER, jcn_cap=1e6) == 1e6

    def test_lin_identity_at_root(self, micro_taxonomy):
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("lin", micro_taxonomy, ic, ENTITY, ENTITY) == 1.0

    def test_lin_zero_ic_pair(self, micro_taxonomy):
        # lcs of root with anything is the root: 2*0 / (0 + x) = 0
        ic = micro_taxonomy.information_content()
        assert sim_ic_family("lin", micro_taxonomy, ic, ENTITY, RIVER) == 0.0


# -- hso ---------------------------------------------------------------------------

_HSO_PATTERN = re.compile(r"^(u+|u+d+|u+h+|u+h+d+|d+|d+h+|h+|h+d+)$")


def _hso_oracle(t: Taxonomy, cfg: MeasureConfig, a: str, b: str) -> float:
    """Exhaustive enumeration of every walk of length <= 5, scored when its
    direction string matches an admissible pattern."""
    best = 0.0

    def walk(node: str, directions: str) -> None:
        nonlocal best
        if node == b and directions and _HSO_PATTERN.match(directions):
            segments = 1 + sum(
                1 for i in range(1, len(directions)) if directions[i] != directions[i - 1]
            )
            best = max(best, cfg.hso_c - len(directions) - cfg.hso_k * (segments - 1))
        if len(directions) == 5:
            return
        for direction, targets in (
            ("u", t.related(node, "hypernym")),
            ("d", t.related(node, "hyponym")),
            ("h", t.horizontal(node)),
        ):
            for target in targets:
                walk(target, directions + direction)

    walk(a, "")
    return max(best, 0.0)


class TestHso:
    def test_identity_strong(self, micro_taxonomy, config):
        assert sim_hso(micro_taxonomy, config, RIVER, RIVER) == 16.0

    def test_horizontal_link_strong(self, micro_taxonomy, config):
        assert sim_hso(micro_taxonomy, config, HOTEL, MOTEL) == 16.0

    def test_up_down_example(self, micro_taxonomy, config):
        assert sim_hso(micro_taxonomy, config, RIVER, CANAL) == 5.0

    def test_longer_path_example(self, micro_taxonomy, config):
        assert sim_hso(micro_taxonomy, config, RIVER, HOTEL) == 3.0

    def test_matches_exhaustive_walk_oracle(self, micro_taxonomy, config):
        non_strong = [
            (a, b)
            for a, b in combinations_with_replacement(MICRO_SENSES, 2)
            if a != b and not (set((a, b)) == {HOTEL, MOTEL})
        ]
        for a, b in non_strong:
            assert sim_hso(micro_taxonomy, config, a, b) == _hso_oracle(
                micro_taxonomy, config, a, b
            ), (a, b)

    def test_compound_lemma_strong(self, config):
        t = Taxonomy(
            [
                Sense(id="box#n#1", lemmas=("box",), gloss="container"),
                Sense(
                    id="postbox#n#1",
                    lemmas=("post box",),
                    gloss="public box for posting mail",
                    parents=("box#n#1",),
                ),
            ]
        )
        assert sim_hso(t, config, "box#n#1", "postbox#n#1") == 16.0
        assert sim_hso(t, config, "postbox#n#1", "box#n#1") == 16.0

    def test_configurable_constants(self, micro_taxonomy):
        cfg = MeasureConfig(hso_c=10.0, hso_k=2.0, hso_strong=20.0)
        assert sim_hso(micro_taxonomy, cfg, RIVER, RIVER) == 20.0
        # up-then-down path of length 2 with one direction change
        assert sim_hso(micro_taxonomy, cfg, RIVER, CANAL) == 10.0 - 2 - 2.0

    def test_floor_at_zero(self):
        # a deep chain only reachable by a path of length 5 with low constant
        senses = [Sense(id="n0#n#1", lemmas=("n0",), gloss="g")]
        for i in range(1, 6):
            senses.append(
                Sense(id=f"n{i}#n#1", lemmas=(f"n{i}",), gloss="g", parents=(f"n{i-1}#n#1",))
            )
        t = Taxonomy(senses)
        cfg = MeasureConfig(hso_c=4.0)
        assert sim_hso(t, cfg, "n5#n#1", "n0#n#1") == 0.0


# -- lesk --------------------------------------------------------------------------


def _overlap_oracle(tokens_a: list[str], tokens_b: list[str]) -> float:
    """Greedy longest-phrase matcher using explicit span scans (no DP table)."""
    a = list(tokens_a)
    b = list(tokens_b)
    total = 0
    while True:
        best_len, best_i, best_j = 0, -1, -1
        for i in range(len(a)):
            for j in range(len(b)):
                length = 0
                while (
                    i + length < len(a)
                    and j + length < len(b)
                    and a[i + length] is not None
                    and a[i + length] == b[j + length]
                ):
                    length += 1
                if length > best_len:
                    best_len, best_i, best_j = length, i, j
        if best_len == 0:
            return float(total)
        total += best_len**2
        for k in range(best_len):
            a[best_i + k] = None
            b[best_j + k] = None


def _gloss_taxonomy(*glosses: str) -> Taxonomy:
    senses = [
        Sense(id=f"g{i}#n#1", lemmas=(f"g{i}",), gloss=text)
        for i, text in enumerate(glosses)
    ]
    return Taxonomy(senses)


class TestLesk:
    def test_identical_four_word_glosses(self):
        t = _gloss_taxonomy("red bridge spans gorge", "red bridge spans gorge")
        cfg = MeasureConfig(lesk_relations=("self",), stopwords=NO_STOPWORDS)
        assert sim_lesk(t, cfg, "g0#n#1", "g1#n#1") == 16.0

    def test_river_canal_single_shared_word(self, micro_taxonomy):
        cfg = MeasureConfig(lesk_relations=("self",), stopwords=frozenset({"of"}))
        assert sim_lesk(micro_taxonomy, cfg, RIVER, CANAL) == 1.0

    def test_disjoint_glosses(self):
        t = _gloss_taxonomy("alpha beta gamma", "delta epsilon zeta")
        cfg = MeasureConfig(lesk_relations=("self",), stopwords=NO_STOPWORDS)
        assert sim_lesk(t, cfg, "g0#n#1", "g1#n#1") == 0.0

    def test_phrase_consumed_once(self):
        # "big red fox" matches once (9); the leftover "red" on each side
        # matches once more (1); nothing is reused
        t = _gloss_taxonomy("big red fox saw red", "big red fox ate red meat")
        cfg = MeasureConfig(lesk_relations=("self",), stopwords=NO_STOPWORDS)
        assert sim_lesk(t, cfg, "g0#n#1", "g1#n#1") == 9.0 + 1.0

    def test_default_relations_on_fixture(self, micro_taxonomy, config):
        # self/self, self/hypernym, hypernym/self, hypernym/hypernym overlaps
        assert sim_lesk(micro_taxonomy, config, RIVER, CANAL) == 20.0

    def test_matches_span_scan_oracle(self, micro_taxonomy, config):
        from semsim.measures import _relation_gloss_tokens

        for a, b in combinations_with_replacement(sorted(MICRO_SENSES), 2):
            expected = sum(
                _overlap_oracle(
                    _relation_gloss_tokens(micro_taxonomy, a, r1, config.stopwords),
                    _relation_gloss_tokens(micro_taxonomy, b, r2, config.stopwords),
                )
                for r1 in config.lesk_relations
                for r2 in config.lesk_relations
            )
            assert sim_lesk(micro_taxonomy, config, a, b) == expected, (a, b)


# -- vector family ------------------------------------------------------------------


class TestVectorFamily:
    def test_hand_built_cooccurrence_matrix(self):
        t = _gloss_taxonomy("a b", "c d")
        cfg = MeasureConfig(stopwords=NO_STOPWORDS, window=2)
        model = CooccurrenceModel.build(t, cfg)
        assert sorted(model.vocabulary) == ["a", "b", "c", "d"]
        expected = np.zeros((4, 4))
        idx = model.vocabulary
        expected[idx["a"], idx["b"]] = 1
        expected[idx["b"], idx["a"]] = 1
        expected[idx["c"], idx["d"]] = 1
        expected[idx["d"], idx["c"]] = 1
        assert np.array_equal(model.matrix.toarray(), expected)

    def test_disjoint_vocabulary_cosine_zero(self):
        t = _gloss_taxonomy("a b", "c d")
        cfg = MeasureConfig(
            stopwords=NO_STOPWORDS, window=2, lesk_relations=("self",)
        )
        assert sim_vector_family("vector", t, cfg, "g0#n#1", "g1#n#1") == 0.0
        assert sim_vector_family("vectorp", t, cfg, "g0#n#1", "g1#n#1") == 0.0

    def test_identical_glosses_cosine_one(self):
        t = _gloss_taxonomy("stone wall by river", "stone wall by river")
        cfg = MeasureConfig(stopwords=NO_STOPWORDS, lesk_relations=("self",))
        assert sim_vector_family("vector", t, cfg, "g0#n#1", "g1#n#1") == pytest.approx(1.0)
        assert sim_vector_family("vectorp", t, cfg, "g0#n#1", "g1#n#1") == pytest.approx(1.0)

    def test_window_respected(self):
        # window 1: tokens two positions apart never co-occur
        t = _gloss_taxonomy("a x b", "b y a")
        cfg = MeasureConfig(stopwords=NO_STOPWORDS, window=1)
        model = CooccurrenceModel.build(t, cfg)
        dense = model.matrix.toarray()
        idx = model.vocabulary
        assert dense[idx["a"], idx["b"]] == 0
        assert dense[idx["a"], idx["x"]] == 1
        cfg2 = MeasureConfig(stopwords=NO_STOPWORDS, window=2)
        dense2 = CooccurrenceModel.build(t, cfg2).matrix.toarray()
        assert dense2[idx["a"], idx["b"]] == 2  # once per document

    def test_vectorp_is_mean_of_relation_cosines(self, micro_taxonomy, config):
        scorer = SimilarityScorer(micro_taxonomy, config)
        model = scorer.cooccurrence_model()
        from semsim.measures import _relation_gloss_tokens

        cosines = []
        for r in config.lesk_relations:
            va = model.text_vector(
                _relation_gloss_tokens(micro_taxonomy, RIVER, r, config.stopwords)
            )
            vb = model.text_vector(
                _relation_gloss_tokens(micro_taxonomy, CANAL, r, config.stopwords)
            )
            cosines.append(model.cosine(va, vb))
        expected = sum(cosines) / len(cosines)
        assert scorer.score("vectorp", RIVER, CANAL) == pytest.approx(expected, abs=1e-12)

    def test_empty_gloss_corpus_rejected(self):
        t = _gloss_taxonomy("", "")
        cfg = MeasureConfig(stopwords=NO_STOPWORDS)
        with pytest.raises(MeasureError, match="corpus"):
            CooccurrenceModel.build(t, cfg)


# -- cross-measure properties ---------------------------------------------------------


class TestMeasureProperties:
    def test_symmetry_all_measures(self, micro_taxonomy, config):
        scorer = SimilarityScorer(micro_taxonomy, config)
        for m in MEASURE_IDS:
            for a, b in combinations_with_replacement(MICRO_SENSES, 2):
                assert scorer.score(m, a, b) == pytest.approx(
                    scorer.score(m, b, a), abs=1e-12
                ), (m, a, b)

    def test_identity_maximality(self, micro_taxonomy, config):
        scorer = SimilarityScorer(micro_taxonomy, config)
        for m in ("path", "wup", "lin", "hso", "vector"):
            for a in MICRO_SENSES:
                own = scorer.score(m, a, a)
                for b in MICRO_SENSES:
                    assert own >= scorer.score(m, a, b) - 1e-12, (m, a, b)

    def test_raw_scores_finite_and_non_negative(self, micro_taxonomy, config):
        scorer = SimilarityScorer(micro_taxonomy, config)
        for m in MEASURE_IDS:
            for a, b in combinations_with_replacement(MICRO_SENSES, 2):
                value = scorer.score(m, a, b)
                assert math.isfinite(value) and value >= 0.0, (m, a, b)

    def test_unknown_measure_lists_valid_ids(self, micro_taxonomy, config):
        scorer = SimilarityScorer(micro_taxonomy, config)
        with pytest.raises(MeasureError, match="path"):
            scorer.score("bogus", RIVER, CANAL)


class TestNormalizeScores:
    def test_endpoints_and_midpoint(self):
        v = normalize_scores(ScoreVector("path", (0.2, 0.6, 1.0)))
        assert v.values == pytest.approx((0.0, 0.5, 1.0), abs=1e-12)

    def test_constant_vector(self):
        v = normalize_scores(ScoreVector("path", (3.0, 3.0, 3.0)))
        assert v.values == (0.5, 0.5, 0.5)

    def test_formula_example(self):
        v = normalize_scores(ScoreVector("path", (0.45, 0.13, 0.91)))
        assert v.values[0] == pytest.approx(0.4103, abs=1e-4)
        assert v.values[1] == 0.0
        assert v.values[2] == 1.0

    @given(
        st.lists(
            st.floats(min_value=0, max_value=1e9, allow_nan=False), min_size=1, max_size=30
        )
    )
    def test_range_and_order_preservation(self, values):
        v = normalize_scores(ScoreVector("x", tuple(values)))
        assert all(0.0 <= x <= 1.0 for x in v.values)
        for i, x in enumerate(values):
            for j, y in enumerate(values):
                if x <= y:
                    assert v.values[i] <= v.values[j]

    def test_idempotent_on_normalized_non_constant(self):
        v = normalize_scores(ScoreVector("x", (0.0, 0.25, 1.0)))
        assert normalize_scores(v).values == v.values

    @given(
        st.lists(
            st.integers(min_value=0, max_value=10**6), min_size=1, max_size=30
        ).filter(lambda xs: len(set(xs)) > 1)
    )
    def test_rank_invariance(self, values):
        raw = ScoreVector("x", tuple(float(x) for x in values))
        assert tuple(rank_scores(raw.values)) == tuple(
            rank_scores(normalize_scores(raw).values)
        )


class TestMeasureConfig:
    def test_rejects_non_positive(self):
        with pytest.raises(MeasureError):
            MeasureConfig(hso_c=0.0)
        with pytest.raises(MeasureError):
            MeasureConfig(jcn_cap=-1.0)
        with pytest.raises(MeasureError):
            MeasureConfig(window=0)

    def test_rejects_empty_relations(self):
        with pytest.raises(MeasureError):
            MeasureConfig(lesk_relations=())

    def test_replace_from_mapping(self):
        cfg = MeasureConfig().replace_from_mapping(
            {"hso_c": "10", "window": "3", "lesk_relations": "self,hypernym"}
        )
        assert cfg.hso_c == 10.0
        assert cfg.window == 3
        assert cfg.lesk_relations == ("self", "hypernym")

    def test_replace_rejects_unknown_key(self):
        with pytest.raises(MeasureError, match="nope"):
            MeasureConfig().replace_from_mapping({"nope": "1"})

    def test_default_stopwords_loaded(self, config):
        assert "the" in config.stopwords
        assert "water" not in config.stopwords
