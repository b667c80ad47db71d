"""Command-line front-end for scoring, ranking, and running experiments.

Subcommands: ``score`` (per-pair raw/normalized scores and ranks),
``rank`` (fractional ranking of numeric CSV columns), ``evaluate``
(per-measure plausibility only), ``experiment`` (the full ensemble
evaluation), and ``report`` (re-render tables and plot series from a saved
experiment directory).

Options can also come from a flat ``key=value`` config file (``--config``);
command-line flags take precedence. Keys mirror the flag names plus the
measure constants (``hso_c``, ``hso_k``, ``hso_strong``, ``jcn_cap``,
``lesk_relations``, ``stopwords``, ``window``).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence

from .datasets import (
    build_ground_truth,
    load_ground_truth,
    load_mapping,
    load_pairs,
    load_responses,
)
from .errors import SemsimError
from .evaluation import GroundTruth, run_experiment
from .measures import MEASURE_IDS, MeasureConfig, SimilarityScorer, normalize_scores
from .rankstats import rank_scores
from .report import load_report, render_table, write_report
from .taxonomy import load_taxonomy

_MEASURE_OPTION_KEYS = (
    "hso_c",
    "hso_k",
    "hso_strong",
    "jcn_cap",
    "lesk_relations",
    "stopwords",
    "window",
)

_AGGREGATION_CHOICES = {
    "scores": ("mean_scores",),
    "rankings": ("mean_rankings",),
    "both": ("mean_scores", "mean_rankings"),
}


class UsageError(SemsimError):
    pass


@dataclass
class ExperimentConfig:
    """Resolved inputs of one run; file references are checked at build time."""

    taxonomy: Path
    pairs: Path | None = None
    mapping: Path | None = None
    responses: Path | None = None
    ground_truth: Path | None = None
    measures: tuple[str, ...] = MEASURE_IDS
    cardinalities: tuple[int, ...] | None = None
    aggregations: tuple[str, ...] = ("mean_rankings",)
    likert: int = 5
    subjects: int = 1
    out: Path | None = None
    seed: int | None = None  # reserved; the pipeline is deterministic
    measure_config: MeasureConfig = field(default_factory=MeasureConfig)

    def __post_init__(self) -> None:
        if not self.measures:
            raise UsageError("measure list is empty")
        unknown = sorted(set(self.measures) - set(MEASURE_IDS))
        if unknown:
            raise UsageError(
                f"unknown measure(s) {', '.join(unknown)}; "
                f"valid measures: {', '.join(MEASURE_IDS)}"
            )
        for name in ("taxonomy", "pairs", "mapping", "responses", "ground_truth"):
            path = getattr(self, name)
            if path is not None and not Path(path).is_file():
                raise UsageError(f"{name.replace('_', '-')} file not found: {path}")
        if self.cardinalities is not None:
            for k in self.cardinalities:
                if not 2 <= k <= len(self.measures):
                    raise UsageError(
                        f"cardinality {k} out of range [2, {len(self.measures)}]"
                    )


def _parse_config_file(path: str) -> dict[str, str]:
    options: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        options[key.strip()] = value.strip()
    return options


def _parse_measures(text: str) -> tuple[str, ...]:
    if text.strip() == "all":
        return MEASURE_IDS
    measures = tuple(m.strip() for m in text.split(",") if m.strip())
    if not measures:
        raise UsageError("empty measure list")
    if len(set(measures)) != len(measures):
        dupes = sorted({m for m in measures if measures.count(m) > 1})
        raise UsageError(f"duplicate measure(s): {', '.join(dupes)}")
    return tuple(sorted(measures))


def _parse_cardinalities(text: str) -> tuple[int, ...]:
    out: set[int] = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk:
            lo_text, _, hi_text = chunk.partition("-")
            try:
                lo, hi = int(lo_text), int(hi_text)
            except ValueError:
                raise UsageError(f"invalid cardinality range {chunk!r}") from None
            out.update(range(lo, hi + 1))
        else:
            try:
                out.add(int(chunk))
            except ValueError:
                raise UsageError(f"invalid cardinality {chunk!r}") from None
    if not out:
        raise UsageError("empty cardinality list")
    return tuple(sorted(out))


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Merge config-file options with flags; flags win."""
    options = _parse_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag: str):
        value = getattr(args, flag, None)
        return value if value is not None else options.get(flag)

    measure_options = {k: v for k, v in options.items() if k in _MEASURE_OPTION_KEYS}
    measure_config = MeasureConfig().replace_from_mapping(measure_options)

    taxonomy = pick("taxonomy")
    if taxonomy is None:
        raise UsageError("--taxonomy is required")
    aggregation = pick("aggregation") or "rankings"
    if aggregation not in _AGGREGATION_CHOICES:
        raise UsageError(
            f"unknown aggregation {aggregation!r}; choose from "
            f"{', '.join(sorted(_AGGREGATION_CHOICES))}"
        )
    measures_text = pick("measures")
    cardinalities_text = pick("cardinalities")
    return ExperimentConfig(
        taxonomy=Path(taxonomy),
        pairs=_opt_path(pick("pairs")),
        mapping=_opt_path(pick("mapping")),
        responses=_opt_path(pick("responses")),
        ground_truth=_opt_path(pick("ground_truth")),
        measures=_parse_measures(measures_text) if measures_text else MEASURE_IDS,
        cardinalities=(
            _parse_cardinalities(cardinalities_text) if cardinalities_text else None
        ),
        aggregations=_AGGREGATION_CHOICES[aggregation],
        likert=int(pick("likert") or 5),
        subjects=int(pick("subjects") or 1),
        out=_opt_path(pick("out")),
        seed=int(pick("seed")) if pick("seed") is not None else None,
        measure_config=measure_config,
    )


def _opt_path(value) -> Path | None:
    return None if value is None else Path(value)


def _load_ground_truth(config: ExperimentConfig) -> GroundTruth:
    mapping = load_mapping(config.mapping) if config.mapping else None
    if config.ground_truth:
        return load_ground_truth(
            config.ground_truth, mapping, subject_count=config.subjects
        )
    if config.pairs and config.responses:
        pairs = load_pairs(config.pairs)
        sense_pairs = mapping.resolve(pairs) if mapping else None
        responses = load_responses(config.responses, pairs, likert=config.likert)
        return build_ground_truth(responses, sense_pairs)
    raise UsageError("need either --ground-truth or both --pairs and --responses")


def _resolved_pairs(config: ExperimentConfig):
    if not config.pairs:
        raise UsageError("--pairs is required")
    pairs = load_pairs(config.pairs)
    if config.mapping:
        sense_pairs = load_mapping(config.mapping).resolve(pairs)
    else:
        sense_pairs = pairs.pairs
    return pairs, sense_pairs


def _open_out(path: Path | None) -> IO[str]:
    if path is None:
        return sys.stdout
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="")


def _fmt(value: float) -> str:
    return format(value, ".10g")


# -- subcommands -------------------------------------------------------------------


def cmd_score(args: argparse.Namespace) -> int:
    config = build_config(args)
    taxonomy = load_taxonomy(config.taxonomy)
    pairs, sense_pairs = _resolved_pairs(config)
    scorer = SimilarityScorer(taxonomy, config.measure_config)
    vectors = {m: scorer.score_pairs(m, sense_pairs) for m in config.measures}
    normalized = {m: normalize_scores(v) for m, v in vectors.items()}
    ranks = {m: rank_scores(v.values) for m, v in vectors.items()}

    handle = _open_out(config.out)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        header = ["term_a", "term_b", "sense_a", "sense_b"]
        for m in config.measures:
            header += [f"{m}_raw", f"{m}_norm", f"{m}_rank"]
        writer.writerow(header)
        for i, ((term_a, term_b), (sense_a, sense_b)) in enumerate(
            zip(pairs, sense_pairs)
        ):
            row = [term_a, term_b, sense_a, sense_b]
            for m in config.measures:
                row += [
                    _fmt(vectors[m].values[i]),
                    _fmt(normalized[m].values[i]),
                    _fmt(ranks[m].values[i]),
                ]
            writer.writerow(row)
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 0


def cmd_rank(args: argparse.Namespace) -> int:
    """Append a descending fractional-rank column for every numeric column."""
    source = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8", newline="")
    try:
        rows = list(csv.reader(source))
    finally:
        if source is not sys.stdin:
            source.close()
    if not rows:
        raise UsageError("empty input")
    header, data = rows[0], rows[1:]
    if not data:
        raise UsageError("no data rows")
    numeric_columns = []
    for j, name in enumerate(header):
        try:
            values = [float(row[j]) for row in data]
        except (ValueError, IndexError):
            continue
        numeric_columns.append((j, name, rank_scores(values)))
    if not numeric_columns:
        raise UsageError("no numeric columns to rank")

    out = _opt_path(getattr(args, "out", None))
    handle = _open_out(out)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header + [f"{name}_rank" for _, name, _ in numeric_columns])
        for i, row in enumerate(data):
            writer.writerow(row + [_fmt(rk.values[i]) for _, _, rk in numeric_columns])
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = build_config(args)
    taxonomy = load_taxonomy(config.taxonomy)
    ground_truth = _load_ground_truth(config)
    report = run_experiment(
        taxonomy,
        config.measure_config,
        ground_truth,
        measures=config.measures,
        cardinalities=(),
        aggregations=config.aggregations,
    )
    handle = _open_out(config.out / "measures.csv" if config.out else None)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["measure", "rho", "p_value", "degenerate"])
        for m in report.measures:
            writer.writerow(
                [
                    m.measure,
                    "" if m.rho is None else _fmt(m.rho),
                    "" if m.p_value is None else _fmt(m.p_value),
                    "true" if m.degenerate else "false",
                ]
            )
    finally:
        if handle is not sys.stdout:
            handle.close()
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    config = build_config(args)
    if config.out is None:
        raise UsageError("--out directory is required for experiment runs")
    taxonomy = load_taxonomy(config.taxonomy)
    ground_truth = _load_ground_truth(config)
    report = run_experiment(
        taxonomy,
        config.measure_config,
        ground_truth,
        measures=config.measures,
        cardinalities=config.cardinalities,
        aggregations=config.aggregations,
    )
    paths = write_report(report, config.out)
    for path in paths:
        print(path)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    report = load_report(args.out)
    write_report(report, args.out)
    sys.stdout.write(render_table(report))
    return 0


# -- parser ------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser, *, data: bool = True) -> None:
    parser.add_argument("--taxonomy", help="taxonomy TSV file")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--measures", help="comma-separated measure ids or 'all'")
    parser.add_argument("--out", help="output file or directory")
    parser.add_argument("--seed", type=int, help="reserved; pipeline is deterministic")
    if data:
        parser.add_argument("--pairs", help="pairs.csv")
        parser.add_argument("--mapping", help="mapping.csv (term to sense id)")
        parser.add_argument("--responses", help="responses.csv (long format)")
        parser.add_argument("--ground-truth", dest="ground_truth", help="ground_truth.csv")
        parser.add_argument("--likert", type=int, help="Likert scale size (default 5)")
        parser.add_argument(
            "--subjects", type=int, help="subject count for precomputed ground truth"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semsim",
        description="Taxonomy semantic similarity measures, ensembles, and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="score term pairs with selected measures")
    _add_common(p_score)
    p_score.set_defaults(func=cmd_score)

    p_rank = sub.add_parser("rank", help="fractionally rank numeric CSV columns")
    p_rank.add_argument("input", help="CSV file, or - for stdin")
    p_rank.add_argument("--out", help="output file (default stdout)")
    p_rank.set_defaults(func=cmd_rank)

    p_eval = sub.add_parser("evaluate", help="per-measure plausibility vs ground truth")
    _add_common(p_eval)
    p_eval.set_defaults(func=cmd_evaluate)

    p_exp = sub.add_parser("experiment", help="full ensemble evaluation run")
    _add_common(p_exp)
    p_exp.add_argument("--cardinalities", help="e.g. '2,3' or '2-10' (default all)")
    p_exp.add_argument(
        "--aggregation",
        choices=sorted(_AGGREGATION_CHOICES),
        help="scores, rankings, or both (default rankings)",
    )
    p_exp.set_defaults(func=cmd_experiment)

    p_rep = sub.add_parser("report", help="re-render a saved experiment directory")
    p_rep.add_argument("--out", required=True, help="experiment output directory")
    p_rep.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SemsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
