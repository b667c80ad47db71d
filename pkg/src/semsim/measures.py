"""The ten taxonomy similarity measures and score normalization.

Edge family (path, lch, wup) uses shortest IS-A paths and depths; IC family
(res, lin, jcn) uses corpus-derived information content; hso searches
admissible lexical-chain paths; lesk and the vector family compare glosses,
the latter through second-order co-occurrence vectors built from the
taxonomy's own glosses.

All measures are symmetric, return finite non-negative raw scores, and are
pure functions of immutable inputs, so pairs and measures may be evaluated
concurrently. Use :class:`SimilarityScorer` to share the information-content
table and the co-occurrence model across calls.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy import sparse

from .errors import MeasureError
from .taxonomy import Taxonomy, sense_pos

__all__ = [
    "MEASURE_IDS",
    "MeasureConfig",
    "ScoreVector",
    "SimilarityScorer",
    "normalize_scores",
    "sim_edge_family",
    "sim_hso",
    "sim_ic_family",
    "sim_lesk",
    "sim_vector_family",
]

#: Closed set of measure identifiers, in canonical (lexicographic) order.
MEASURE_IDS = ("hso", "jcn", "lch", "lesk", "lin", "path", "res", "vector", "vectorp", "wup")

EDGE_MEASURES = ("lch", "path", "wup")
IC_MEASURES = ("jcn", "lin", "res")

_TOKEN_RE = re.compile(r"\w+")


def _load_default_stopwords() -> frozenset[str]:
    text = resources.files("semsim").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip() and not w.startswith("#"))


def load_stopwords(path: str) -> frozenset[str]:
    """Read a stopword file: one word per line, ``#`` comments allowed."""
    with open(path, encoding="utf-8") as handle:
        return frozenset(
            w.strip().lower() for w in handle if w.strip() and not w.startswith("#")
        )


@dataclass(frozen=True)
class MeasureConfig:
    """Tunable constants the measure definitions require.

    ``window`` is the number of neighbours considered on each side of a token
    when counting co-occurrences for the vector measures.
    """

    hso_c: float = 8.0
    hso_k: float = 1.0
    hso_strong: float = 16.0
    jcn_cap: float = 1e6
    lesk_relations: tuple[str, ...] = ("self", "hypernym", "hyponym")
    stopwords: frozenset[str] = field(default_factory=_load_default_stopwords)
    window: int = 2

    def __post_init__(self) -> None:
        for name in ("hso_c", "hso_k", "hso_strong", "jcn_cap"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise MeasureError(f"{name} must be positive, got {value!r}")
        if not (isinstance(self.window, int) and self.window >= 1):
            raise MeasureError(f"window must be a positive integer, got {self.window!r}")
        if not self.lesk_relations:
            raise MeasureError("lesk_relations must not be empty")

    def replace_from_mapping(self, options: Mapping[str, str]) -> "MeasureConfig":
        """New config with string-valued overrides (config-file keys = field names)."""
        kwargs: dict[str, object] = {}
        for key, raw in options.items():
            if key in ("hso_c", "hso_k", "hso_strong", "jcn_cap"):
                kwargs[key] = float(raw)
            elif key == "window":
                kwargs[key] = int(raw)
            elif key == "lesk_relations":
                kwargs[key] = tuple(r.strip() for r in raw.split(",") if r.strip())
            elif key == "stopwords":
                kwargs[key] = load_stopwords(raw)
            else:
                raise MeasureError(f"unknown measure option {key!r}")
        return MeasureConfig(
            **{
                name: kwargs.get(name, getattr(self, name))
                for name in (
                    "hso_c",
                    "hso_k",
                    "hso_strong",
                    "jcn_cap",
                    "lesk_relations",
                    "stopwords",
                    "window",
                )
            }
        )


@dataclass(frozen=True)
class ScoreVector:
    """Raw or normalized scores for one measure (or ensemble), pair order preserved."""

    measure: str
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise MeasureError("empty score vector")
        for v in self.values:
            if not (math.isfinite(v) and v >= 0.0):
                raise MeasureError(
                    f"score vector for {self.measure!r} contains invalid value {v!r}"
                )

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)


def normalize_scores(v: ScoreVector) -> ScoreVector:
    """Min-max normalization over the pair set; a constant vector maps to 0.5."""
    lo = min(v.values)
    hi = max(v.values)
    if hi == lo:
        return ScoreVector(v.measure, tuple(0.5 for _ in v.values))
    span = hi - lo
    return ScoreVector(v.measure, tuple((x - lo) / span for x in v.values))


# -- tokenization ---------------------------------------------------------------


def _tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _content_tokens(text: str, stopwords: frozenset[str]) -> list[str]:
    return [t for t in _tokenize(text) if t not in stopwords]


def _relation_gloss_tokens(
    t: Taxonomy, sense_id: str, relation: str, stopwords: frozenset[str]
) -> list[str]:
    """Content tokens of the concatenated glosses reached by one relation."""
    chunks = [t.sense(target).gloss for target in t.related(sense_id, relation)]
    return _content_tokens(" ".join(chunks), stopwords)


# -- edge and information-content families ---------------------------------------


def sim_edge_family(measure: str, t: Taxonomy, a: str, b: str) -> float:
    """path: 1/(edges+1); lch: -ln(nodes / (2 * max_depth)); wup: 2*depth(lcs)/(depth(a)+depth(b))."""
    if measure not in EDGE_MEASURES:
        raise MeasureError(f"not an edge-family measure: {measure!r}")
    pos_a = sense_pos(t.sense(a).id)
    pos_b = sense_pos(t.sense(b).id)
    if pos_a != pos_b:
        raise MeasureError(f"pos mismatch: {a!r} is {pos_a!r}, {b!r} is {pos_b!r}")
    if measure == "wup":
        subsumer = t.lcs(a, b)
        if subsumer is None:
            return 0.0
        return 2.0 * t.depth(subsumer) / (t.depth(a) + t.depth(b))
    d = t.shortest_path_edges(a, b)
    if d is None:
        return 0.0
    if measure == "path":
        return 1.0 / (d + 1)
    return -math.log((d + 1) / (2.0 * t.max_depth(pos_a)))


def sim_ic_family(
    measure: str,
    t: Taxonomy,
    ic: Mapping[str, float],
    a: str,
    b: str,
    *,
    jcn_cap: float = 1e6,
) -> float:
    """res: IC(lcs); lin: 2*IC(lcs)/(IC(a)+IC(b)); jcn: 1/(IC(a)+IC(b)-2*IC(lcs)), capped."""
    if measure not in IC_MEASURES:
        raise MeasureError(f"not an IC-family measure: {measure!r}")
    t.sense(a)
    t.sense(b)
    subsumer = t.lcs(a, b)
    ic_lcs = ic[subsumer] if subsumer is not None else 0.0
    if measure == "res":
        return ic_lcs
    if measure == "lin":
        if a == b:
            return 1.0
        denom = ic[a] + ic[b]
        return 0.0 if denom == 0.0 else 2.0 * ic_lcs / denom
    distance = max(ic[a] + ic[b] - 2.0 * ic_lcs, 0.0)
    if distance < 1.0 / jcn_cap:
        return jcn_cap
    return 1.0 / distance


# -- Hirst-St-Onge lexical chains -------------------------------------------------

# Admissible medium-strong path shapes over direction segments
# (u = hypernym, d = hyponym, h = horizontal); every state is accepting and
# the number of direction changes equals len(state) - 1.
_HSO_TRANSITIONS: dict[str, dict[str, str]] = {
    "": {"u": "u", "d": "d", "h": "h"},
    "u": {"u": "u", "d": "ud", "h": "uh"},
    "ud": {"d": "ud"},
    "uh": {"h": "uh", "d": "uhd"},
    "uhd": {"d": "uhd"},
    "d": {"d": "d", "h": "dh"},
    "dh": {"h": "dh"},
    "h": {"h": "h", "d": "hd"},
    "hd": {"d": "hd"},
}

_HSO_MAX_LENGTH = 5


def _lemma_words(t: Taxonomy, sense_id: str) -> list[tuple[str, ...]]:
    return [
        tuple(re.split(r"[\s_-]+", lemma.lower().strip()))
        for lemma in t.sense(sense_id).lemmas
    ]


def _is_compound_of(words_a: list[tuple[str, ...]], words_b: list[tuple[str, ...]]) -> bool:
    """True when a multi-word lemma on one side contains a whole lemma word of the other."""
    for compound in words_a:
        if len(compound) < 2:
            continue
        for other in words_b:
            if len(other) == 1 and other[0] in compound:
                return True
    return False


def sim_hso(t: Taxonomy, cfg: MeasureConfig, a: str, b: str) -> float:
    """Lexical-chain relatedness: strong relations score ``hso_strong``;
    otherwise the best admissible path of length <= 5 scores
    ``hso_c - length - hso_k * direction_changes``, floored at 0."""
    t.sense(a)
    t.sense(b)
    if a == b or b in t.horizontal(a) or a in t.horizontal(b):
        return cfg.hso_strong
    words_a = _lemma_words(t, a)
    words_b = _lemma_words(t, b)
    if _is_compound_of(words_a, words_b) or _is_compound_of(words_b, words_a):
        return cfg.hso_strong

    neighbours = {
        "u": lambda x: t.related(x, "hypernym"),
        "d": lambda x: t.related(x, "hyponym"),
        "h": lambda x: t.horizontal(x),
    }
    best = 0.0
    seen = {(a, "")}
    frontier: list[tuple[str, str]] = [(a, "")]
    for length in range(1, _HSO_MAX_LENGTH + 1):
        next_frontier: list[tuple[str, str]] = []
        for node, state in frontier:
            for direction, next_state in _HSO_TRANSITIONS[state].items():
                for target in neighbours[direction](node):
                    key = (target, next_state)
                    if key in seen:
                        continue
                    seen.add(key)
                    if target == b:
                        changes = len(next_state) - 1
                        score = cfg.hso_c - length - cfg.hso_k * changes
                        best = max(best, score)
                    next_frontier.append(key)
        frontier = next_frontier
    return max(best, 0.0)


# -- extended gloss overlap --------------------------------------------------------


def _phrase_overlap(tokens_a: Sequence[str], tokens_b: Sequence[str]) -> float:
    """Sum of squared lengths of maximal common contiguous phrases.

    Repeatedly extracts the longest common word phrase and consumes the
    matched occurrence on both sides so no token is reused.
    """
    a = list(tokens_a)
    b = list(tokens_b)
    total = 0
    marker = 0
    while a and b:
        best_len = 0
        best_i = best_j = -1
        prev = [0] * (len(b) + 1)
        for i in range(1, len(a) + 1):
            cur = [0] * (len(b) + 1)
            for j in range(1, len(b) + 1):
                if a[i - 1] == b[j - 1]:
                    cur[j] = prev[j - 1] + 1
                    if cur[j] > best_len:
                        best_len, best_i, best_j = cur[j], i, j
            prev = cur
        if best_len == 0:
            break
        total += best_len * best_len
        for k in range(best_len):
            a[best_i - 1 - k] = f"\x00a{marker}"
            b[best_j - 1 - k] = f"\x00b{marker}"
            marker += 1
    return float(total)


def sim_lesk(t: Taxonomy, cfg: MeasureConfig, a: str, b: str) -> float:
    """Extended gloss overlap summed over all pairs of configured relations."""
    t.sense(a)
    t.sense(b)
    tokens_a = {
        r: _relation_gloss_tokens(t, a, r, cfg.stopwords) for r in cfg.lesk_relations
    }
    tokens_b = {
        r: _relation_gloss_tokens(t, b, r, cfg.stopwords) for r in cfg.lesk_relations
    }
    return sum(
        _phrase_overlap(tokens_a[r1], tokens_b[r2])
        for r1 in cfg.lesk_relations
        for r2 in cfg.lesk_relations
    )


# -- second-order co-occurrence vectors ---------------------------------------------


class CooccurrenceModel:
    """Word co-occurrence counts over the taxonomy's gloss corpus.

    Each gloss is one document; two content words co-occur when they appear
    within ``window`` positions of each other in the same document. Built
    once per (taxonomy, config) and read-only afterwards.
    """

    def __init__(self, vocabulary: dict[str, int], matrix: sparse.csr_matrix):
        self.vocabulary = vocabulary
        self.matrix = matrix

    @classmethod
    def build(cls, t: Taxonomy, cfg: MeasureConfig) -> "CooccurrenceModel":
        docs = [
            _content_tokens(t.sense(sid).gloss, cfg.stopwords) for sid in sorted(t)
        ]
        vocabulary = {w: i for i, w in enumerate(sorted({w for d in docs for w in d}))}
        if not vocabulary:
            raise MeasureError("gloss corpus is empty: no content words in any gloss")
        rows: list[int] = []
        cols: list[int] = []
        for doc in docs:
            idx = [vocabulary[w] for w in doc]
            for i in range(len(idx)):
                for j in range(max(0, i - cfg.window), min(len(idx), i + cfg.window + 1)):
                    if i != j:
                        rows.append(idx[i])
                        cols.append(idx[j])
        size = len(vocabulary)
        matrix = sparse.coo_matrix(
            (np.ones(len(rows), dtype=np.float64), (rows, cols)), shape=(size, size)
        ).tocsr()
        matrix.sum_duplicates()
        return cls(vocabulary, matrix)

    def text_vector(self, tokens: Iterable[str]) -> np.ndarray:
        """Sum of the co-occurrence vectors of the known tokens (with multiplicity)."""
        idx = [self.vocabulary[w] for w in tokens if w in self.vocabulary]
        if not idx:
            return np.zeros(len(self.vocabulary))
        return np.asarray(self.matrix[idx].sum(axis=0)).ravel()

    @staticmethod
    def cosine(u: np.ndarray, v: np.ndarray) -> float:
        nu = float(np.linalg.norm(u))
        nv = float(np.linalg.norm(v))
        if nu == 0.0 or nv == 0.0:
            return 0.0
        return min(1.0, float(u @ v) / (nu * nv))


def sim_vector_family(
    measure: str,
    t: Taxonomy,
    cfg: MeasureConfig,
    a: str,
    b: str,
    model: CooccurrenceModel | None = None,
) -> float:
    """vector: cosine of gloss vectors over relation-augmented glosses;
    vectorp: mean of per-relation gloss-vector cosines."""
    if measure not in ("vector", "vectorp"):
        raise MeasureError(f"not a vector-family measure: {measure!r}")
    t.sense(a)
    t.sense(b)
    if model is None:
        model = CooccurrenceModel.build(t, cfg)
    per_relation_a = [
        _relation_gloss_tokens(t, a, r, cfg.stopwords) for r in cfg.lesk_relations
    ]
    per_relation_b = [
        _relation_gloss_tokens(t, b, r, cfg.stopwords) for r in cfg.lesk_relations
    ]
    if measure == "vector":
        va = model.text_vector([w for tokens in per_relation_a for w in tokens])
        vb = model.text_vector([w for tokens in per_relation_b for w in tokens])
        return model.cosine(va, vb)
    cosines = [
        model.cosine(model.text_vector(ta), model.text_vector(tb))
        for ta, tb in zip(per_relation_a, per_relation_b)
    ]
    return sum(cosines) / len(cosines)


# -- shared scorer -------------------------------------------------------------------


class SimilarityScorer:
    """Evaluates any of the ten measures against one taxonomy and config.

    The information-content table is computed up front; the co-occurrence
    model is built on first use of a vector measure and reused afterwards.
    """

    def __init__(self, taxonomy: Taxonomy, config: MeasureConfig | None = None):
        self.taxonomy = taxonomy
        self.config = config or MeasureConfig()
        self._ic = taxonomy.information_content()
        self._cooccurrence: CooccurrenceModel | None = None

    def cooccurrence_model(self) -> CooccurrenceModel:
        if self._cooccurrence is None:
            self._cooccurrence = CooccurrenceModel.build(self.taxonomy, self.config)
        return self._cooccurrence

    def score(self, measure: str, a: str, b: str) -> float:
        if measure in EDGE_MEASURES:
            return sim_edge_family(measure, self.taxonomy, a, b)
        if measure in IC_MEASURES:
            return sim_ic_family(
                measure, self.taxonomy, self._ic, a, b, jcn_cap=self.config.jcn_cap
            )
        if measure == "hso":
            return sim_hso(self.taxonomy, self.config, a, b)
        if measure == "lesk":
            return sim_lesk(self.taxonomy, self.config, a, b)
        if measure in ("vector", "vectorp"):
            return sim_vector_family(
                measure, self.taxonomy, self.config, a, b, model=self.cooccurrence_model()
            )
        raise MeasureError(
            f"unknown measure {measure!r}; valid measures: {', '.join(MEASURE_IDS)}"
        )

    def score_pairs(self, measure: str, pairs: Sequence[tuple[str, str]]) -> ScoreVector:
        return ScoreVector(measure, tuple(self.score(measure, a, b) for a, b in pairs))
