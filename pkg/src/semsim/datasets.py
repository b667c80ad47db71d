"""Ingestion of term pairs, sense mappings, survey responses, and ground truth.

File formats (CSV, UTF-8, header row required):

* pairs.csv:         ``term_a,term_b``
* mapping.csv:       ``term,source_tag,sense_id``
* responses.csv:     ``subject_id,pair_index,rating`` (long format, 1-based
  pair indices referring to rows of the pair file; ratings on a 1..L Likert
  scale)
* ground_truth.csv:  ``term_a,term_b,h_sc[,h_rk]`` (precomputed alternative
  to responses)

The pair file's row order is the canonical pair order for every downstream
score, rank, and report vector.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

from .errors import DatasetError
from .evaluation import GroundTruth
from .rankstats import RankVector, rank_scores

__all__ = [
    "PairSet",
    "SurveyResponses",
    "TermMapping",
    "build_ground_truth",
    "load_ground_truth",
    "load_mapping",
    "load_pairs",
    "load_responses",
]


@dataclass(frozen=True)
class PairSet:
    """Ordered list of term pairs; order defines every downstream vector."""

    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise DatasetError("no pairs")
        seen = set()
        for a, b in self.pairs:
            if not a or not b:
                raise DatasetError("pair with an empty term")
            if (a, b) in seen:
                raise DatasetError(f"duplicate pair: {a!r}, {b!r}")
            seen.add((a, b))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self.pairs)


@dataclass(frozen=True)
class TermMapping:
    """Display term to sense-id mapping, with the source tag it came from."""

    rows: tuple[tuple[str, str, str], ...]

    def __post_init__(self) -> None:
        terms = [term for term, _, _ in self.rows]
        if len(set(terms)) != len(terms):
            dupes = sorted({t for t in terms if terms.count(t) > 1})
            raise DatasetError(f"duplicate term(s) in mapping: {', '.join(dupes)}")

    def sense_id(self, term: str) -> str:
        for row_term, _, sense in self.rows:
            if row_term == term:
                return sense
        raise DatasetError(f"term {term!r} is not in the mapping")

    def resolve(self, pairs: PairSet) -> tuple[tuple[str, str], ...]:
        """Sense-id pairs for a pair set; reports every unmapped term at once."""
        table = {term: sense for term, _, sense in self.rows}
        missing = sorted(
            {t for pair in pairs for t in pair if t not in table}
        )
        if missing:
            raise DatasetError(f"unmapped term(s): {', '.join(missing)}")
        return tuple((table[a], table[b]) for a, b in pairs)


@dataclass(frozen=True)
class SurveyResponses:
    """Subject-by-pair Likert ratings; None marks a skipped cell."""

    likert: int
    pair_labels: tuple[tuple[str, str], ...]
    subject_ids: tuple[str, ...]
    ratings: tuple[tuple[int | None, ...], ...]

    def __post_init__(self) -> None:
        if self.likert < 2:
            raise DatasetError("Likert scale must have at least 2 points")
        if not self.subject_ids:
            raise DatasetError("no subjects")
        if len(self.ratings) != len(self.subject_ids):
            raise DatasetError("ratings row count does not match subject count")
        n = len(self.pair_labels)
        for subject, row in zip(self.subject_ids, self.ratings):
            if len(row) != n:
                raise DatasetError(
                    f"ragged ratings matrix: subject {subject!r} has {len(row)} "
                    f"cells, expected {n}"
                )
            if all(cell is None for cell in row):
                raise DatasetError(f"subject {subject!r} has no ratings")
            for cell in row:
                if cell is not None and not 1 <= cell <= self.likert:
                    raise DatasetError(
                        f"rating {cell} of subject {subject!r} outside 1..{self.likert}"
                    )

    @property
    def subjects(self) -> int:
        return len(self.subject_ids)


def build_ground_truth(
    responses: SurveyResponses,
    sense_pairs: Sequence[tuple[str, str]] | None = None,
) -> GroundTruth:
    """Normalize ratings onto [0,1], average per pair, and rank the means.

    Each rating maps linearly to (rating - 1) / (L - 1); skipped cells are
    left out of that pair's mean. ``sense_pairs`` supplies resolved sense
    ids when the pair labels are display terms.
    """
    n = len(responses.pair_labels)
    if n < 4:
        raise DatasetError(f"too few pairs: {n} < 4")
    if sense_pairs is not None and len(sense_pairs) != n:
        raise DatasetError("sense pair list does not match the pair count")
    span = responses.likert - 1
    h_sc = []
    for j in range(n):
        cells = [row[j] for row in responses.ratings if row[j] is not None]
        if not cells:
            a, b = responses.pair_labels[j]
            raise DatasetError(f"pair {a!r}, {b!r} has no ratings")
        h_sc.append(sum((c - 1) / span for c in cells) / len(cells))
    pairs = tuple(sense_pairs) if sense_pairs is not None else responses.pair_labels
    return GroundTruth(
        pairs=pairs,
        h_sc=tuple(h_sc),
        h_rk=rank_scores(h_sc),
        subject_count=responses.subjects,
        labels=responses.pair_labels,
    )


# -- CSV loaders -----------------------------------------------------------------


def _read_rows(
    source: str | Path | IO[str], expected_header: Sequence[str], optional: int = 0
) -> list[list[str]]:
    """Rows of a CSV file after checking the header and column counts."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as handle:
            return _read_rows(handle, expected_header, optional)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty file") from None
    required = len(expected_header) - optional
    header = [h.strip().lower() for h in header]
    if header[:required] != [h.lower() for h in expected_header[:required]]:
        raise DatasetError(
            f"unexpected header {','.join(header)!r}; "
            f"expected {','.join(expected_header)!r}"
        )
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if not required <= len(row) <= len(expected_header):
            raise DatasetError(
                f"line {lineno}: expected {required}"
                + (f"-{len(expected_header)}" if optional else "")
                + f" columns, found {len(row)}"
            )
        rows.append([cell.strip() for cell in row])
    return rows


def load_pairs(source: str | Path | IO[str]) -> PairSet:
    """Read pairs.csv, preserving row order."""
    rows = _read_rows(source, ("term_a", "term_b"))
    if not rows:
        raise DatasetError("no pairs")
    return PairSet(tuple((a, b) for a, b in rows))


def load_mapping(source: str | Path | IO[str]) -> TermMapping:
    """Read mapping.csv (term, source_tag, sense_id)."""
    rows = _read_rows(source, ("term", "source_tag", "sense_id"))
    if not rows:
        raise DatasetError("empty mapping")
    return TermMapping(tuple((t, tag, sid) for t, tag, sid in rows))


def load_responses(
    source: str | Path | IO[str], pairs: PairSet, likert: int = 5
) -> SurveyResponses:
    """Read responses.csv (long format) against a pair set.

    Every (subject, pair) combination may appear at most once; pairs a
    subject skipped are recorded as None.
    """
    rows = _read_rows(source, ("subject_id", "pair_index", "rating"))
    if not rows:
        raise DatasetError("no responses")
    n = len(pairs)
    cells: dict[str, list[int | None]] = {}
    order: list[str] = []
    for subject, index_text, rating_text in rows:
        try:
            index = int(index_text)
            rating = int(rating_text)
        except ValueError:
            raise DatasetError(
                f"non-integer pair index or rating: {index_text!r}, {rating_text!r}"
            ) from None
        if not 1 <= index <= n:
            raise DatasetError(
                f"pair index {index} outside 1..{n} for subject {subject!r}"
            )
        if subject not in cells:
            cells[subject] = [None] * n
            order.append(subject)
        if cells[subject][index - 1] is not None:
            raise DatasetError(
                f"duplicate rating for subject {subject!r}, pair {index}"
            )
        cells[subject][index - 1] = rating
    return SurveyResponses(
        likert=likert,
        pair_labels=pairs.pairs,
        subject_ids=tuple(order),
        ratings=tuple(tuple(cells[s]) for s in order),
    )


def load_ground_truth(
    source: str | Path | IO[str],
    mapping: TermMapping | None = None,
    subject_count: int = 1,
) -> GroundTruth:
    """Read a precomputed ground-truth file.

    When the optional ``h_rk`` column is present the explicit ranks win: they
    are normalized to a fractional ranking (order preserved) and a warning is
    emitted if they disagree with ranking the scores directly.
    """
    rows = _read_rows(source, ("term_a", "term_b", "h_sc", "h_rk"), optional=1)
    if not rows:
        raise DatasetError("no pairs")
    labels = []
    scores = []
    explicit: list[float] = []
    has_explicit = len(rows[0]) == 4
    for row in rows:
        if (len(row) == 4) != has_explicit:
            raise DatasetError("h_rk column present on some rows but not all")
        labels.append((row[0], row[1]))
        try:
            scores.append(float(row[2]))
        except ValueError:
            raise DatasetError(f"invalid h_sc value {row[2]!r}") from None
        if has_explicit:
            try:
                explicit.append(float(row[3]))
            except ValueError:
                raise DatasetError(f"invalid h_rk value {row[3]!r}") from None

    pair_set = PairSet(tuple(labels))
    sense_pairs = mapping.resolve(pair_set) if mapping is not None else pair_set.pairs
    if has_explicit:
        h_rk = rank_scores([-r for r in explicit])  # ascending, ties averaged
        if tuple(h_rk) != tuple(rank_scores(scores)):
            warnings.warn(
                "explicit h_rk column disagrees with ranking h_sc; "
                "keeping the explicit ranking",
                stacklevel=2,
            )
    else:
        h_rk = rank_scores(scores)
    return GroundTruth(
        pairs=sense_pairs,
        h_sc=tuple(scores),
        h_rk=h_rk,
        subject_count=subject_count,
        labels=pair_set.pairs,
    )
