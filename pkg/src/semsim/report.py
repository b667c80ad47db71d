"""Serialization of evaluation reports: CSV row dumps, aggregate tables,
a plain-text summary table, and plot-ready data series.

All writers format numbers deterministically, so identical runs produce
byte-identical files. ``load_report`` reconstructs a report from the row
CSVs; aggregates are recomputed on the fly and match the original run.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import IO, Iterable, Sequence

from .ensemble import Ensemble, RULE_TAGS
from .errors import EvaluationError
from .evaluation import (
    CRITERIA,
    CriteriaFlags,
    EnsembleResult,
    EvaluationReport,
    MeasureResult,
)

__all__ = ["load_report", "render_table", "write_report"]

_CRITERION_TITLES = {
    "total": "Total success",
    "partial": "Partial success",
    "over_mean": "Succ. mean",
    "over_median": "Succ. med.",
}

_RULE_TITLES = {
    "mean_scores": "Mean of scores (A_s)",
    "mean_rankings": "Mean of rankings (A_r)",
}


def _fmt(value: float | None) -> str:
    return "" if value is None else format(value, ".10g")


def _fmt_flag(value: bool | None) -> str:
    return "" if value is None else ("true" if value else "false")


def _writer(handle: IO[str]):
    return csv.writer(handle, lineterminator="\n")


def write_report(report: EvaluationReport, outdir: str | Path) -> list[Path]:
    """Write every report file into ``outdir`` and return the paths written."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, writer in (
        ("meta.csv", _write_meta),
        ("measures.csv", _write_measures),
        ("ensembles.csv", _write_ensembles),
        ("aggregates.csv", _write_aggregates),
        ("success_by_cardinality.csv", _write_success_series),
        ("measure_success.csv", _write_measure_series),
        ("improvement_by_cardinality.csv", _write_improvement_series),
    ):
        path = out / name
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer(report, handle)
        paths.append(path)
    table = out / "table.txt"
    table.write_text(render_table(report), encoding="utf-8")
    paths.append(table)
    return paths


def _write_meta(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(["key", "value"])
    w.writerow(["n_pairs", str(report.n_pairs)])
    w.writerow(["subject_count", str(report.subject_count)])
    w.writerow(["measures", "+".join(report.measure_ids)])
    w.writerow(["cardinalities", "+".join(str(k) for k in report.cardinalities)])
    w.writerow(["rules", "+".join(report.rules)])
    for note in report.notes:
        w.writerow(["note", note])


def _write_measures(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(["measure", "rho", "p_value", "degenerate"])
    for m in report.measures:
        w.writerow([m.measure, _fmt(m.rho), _fmt(m.p_value), _fmt_flag(m.degenerate)])


def _write_ensembles(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(
        [
            "rule",
            "cardinality",
            "members",
            "label",
            "rho",
            "p_value",
            "total",
            "partial",
            "over_mean",
            "over_median",
            "delta_mean",
            "delta_median",
            "degenerate",
        ]
    )
    for e in report.ensembles:
        flags = e.flags
        w.writerow(
            [
                e.rule,
                str(e.cardinality),
                "+".join(e.ensemble.members),
                e.label,
                _fmt(e.rho),
                _fmt(e.p_value),
                _fmt_flag(flags.total if flags else None),
                _fmt_flag(flags.partial if flags else None),
                _fmt_flag(flags.over_mean if flags else None),
                _fmt_flag(flags.over_median if flags else None),
                _fmt(e.delta_mean),
                _fmt(e.delta_median),
                _fmt_flag(e.degenerate),
            ]
        )


def _write_aggregates(report: EvaluationReport, handle: IO[str]) -> None:
    """Long-format aggregate table: success rates per rule, criterion,
    cardinality ('all' = unweighted mean over cardinalities), and measure
    ('mean' = all ensembles of that cardinality); delta_* rows carry mean
    improvements instead of percentages."""
    w = _writer(handle)
    w.writerow(["rule", "criterion", "cardinality", "measure", "value"])
    for rule in report.rules:
        grid = report.success_grid(rule)
        by_k = report.success_by_cardinality(rule)
        by_measure = report.success_by_measure(rule)
        mean_success = report.mean_success(rule)
        for criterion in CRITERIA:
            for k in report.cardinalities:
                for measure in report.measure_order():
                    w.writerow(
                        [rule, criterion, str(k), measure, _fmt(grid[criterion][k][measure])]
                    )
                w.writerow([rule, criterion, str(k), "mean", _fmt(by_k[criterion][k])])
            for measure in report.measure_order():
                w.writerow(
                    [rule, criterion, "all", measure, _fmt(by_measure[criterion][measure])]
                )
            w.writerow([rule, criterion, "all", "mean", _fmt(mean_success[criterion])])
        improvement = report.improvement_by_cardinality(rule)
        overall = report.overall_improvement(rule)
        for k in report.cardinalities:
            w.writerow([rule, "delta_mean", str(k), "mean", _fmt(improvement[k][0])])
            w.writerow([rule, "delta_median", str(k), "mean", _fmt(improvement[k][1])])
        w.writerow([rule, "delta_mean", "all", "mean", _fmt(overall[0])])
        w.writerow([rule, "delta_median", "all", "mean", _fmt(overall[1])])


def _write_success_series(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(["x", "y", "series"])
    for rule in report.rules:
        by_k = report.success_by_cardinality(rule)
        for criterion in CRITERIA:
            for k in report.cardinalities:
                value = by_k[criterion][k]
                if value is not None:
                    w.writerow([str(k), _fmt(value), f"{RULE_TAGS[rule]}:{criterion}"])


def _write_measure_series(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(["x", "y", "series"])
    for rule in report.rules:
        by_measure = report.success_by_measure(rule)
        for criterion in ("total", "partial"):
            for measure in report.measure_order():
                value = by_measure[criterion][measure]
                if value is not None:
                    w.writerow([measure, _fmt(value), f"{RULE_TAGS[rule]}:{criterion}"])


def _write_improvement_series(report: EvaluationReport, handle: IO[str]) -> None:
    w = _writer(handle)
    w.writerow(["x", "y", "series"])
    for rule in report.rules:
        improvement = report.improvement_by_cardinality(rule)
        for key, idx in (("delta_mean", 0), ("delta_median", 1)):
            for k in report.cardinalities:
                value = improvement[k][idx]
                if value is not None:
                    w.writerow([str(k), _fmt(value), f"{RULE_TAGS[rule]}:{key}"])


# -- plain-text table -----------------------------------------------------------


def _pct_cell(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def render_table(report: EvaluationReport) -> str:
    """Fixed-width summary: per-measure plausibility and the four criteria
    across cardinalities, one block per aggregation rule."""
    order = report.measure_order()
    rho_by_measure = {m.measure: m.rho for m in report.measures}
    width = max(7, max(len(m) for m in order) + 1)
    lines = []
    lines.append(
        f"Ensemble evaluation: {report.n_pairs} pairs, "
        f"{report.subject_count} subject(s), {len(report.measure_ids)} measures, "
        f"cardinalities {'+'.join(str(k) for k in report.cardinalities) or '-'}"
    )
    for note in report.notes:
        lines.append(note)
    degenerate = [m.measure for m in report.measures if m.degenerate]
    if degenerate:
        lines.append(
            "Degenerate (zero-variance) measures excluded from aggregate means: "
            + ", ".join(degenerate)
        )

    label_w = 20
    def row(label: str, k: str, cells: Iterable[str], mean_cell: str) -> str:
        body = "".join(f"{c:>{width}}" for c in cells)
        return f"{label:<{label_w}} {k:>4} |{body} | {mean_cell:>7}"

    for rule in report.rules:
        lines.append("")
        lines.append(f"=== {_RULE_TITLES[rule]} ===")
        lines.append(row("", "|E|", order, "mean"))
        rho_cells = [
            "-" if rho_by_measure[m] is None else f"{rho_by_measure[m]:.3f}"
            for m in order
        ]
        defined = [r for r in rho_by_measure.values() if r is not None]
        mean_rho = f"{sum(defined) / len(defined):.3f}" if defined else "-"
        lines.append(row("rho_sim", "-", rho_cells, mean_rho))
        grid = report.success_grid(rule)
        by_k = report.success_by_cardinality(rule)
        by_measure = report.success_by_measure(rule)
        mean_success = report.mean_success(rule)
        for criterion in ("total", "partial"):
            title = _CRITERION_TITLES[criterion] + " (%)"
            for i, k in enumerate(report.cardinalities):
                cells = [_pct_cell(grid[criterion][k][m]) for m in order]
                lines.append(
                    row(title if i == 0 else "", str(k), cells, _pct_cell(by_k[criterion][k]))
                )
            cells = [_pct_cell(by_measure[criterion][m]) for m in order]
            lines.append(row("  mean", "all", cells, _pct_cell(mean_success[criterion])))
        for criterion in ("over_mean", "over_median"):
            cells = [_pct_cell(by_measure[criterion][m]) for m in order]
            lines.append(
                row(
                    _CRITERION_TITLES[criterion] + " (%)",
                    "all",
                    cells,
                    _pct_cell(mean_success[criterion]),
                )
            )
        overall = report.overall_improvement(rule)
        if overall[0] is not None:
            lines.append(
                f"Mean improvement over member mean: {overall[0]:+.3f}; "
                f"over member median: {overall[1]:+.3f}"
            )
        total_rows = sum(report.counts(rule).values())
        lines.append(
            f"Ensembles not above any member: {report.partial_violations(rule)} "
            f"of {total_rows}"
        )
    distance = report.rule_distance()
    if distance is not None:
        gaps = "; ".join(
            f"{_CRITERION_TITLES[c]} {distance[c]:.1f}" for c in CRITERIA
        )
        lines.append("")
        lines.append(f"Largest success-rate gap between rules (pct points): {gaps}")
    return "\n".join(lines) + "\n"


# -- reconstruction ---------------------------------------------------------------


def _read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def load_report(outdir: str | Path) -> EvaluationReport:
    """Rebuild a report from meta.csv, measures.csv, and ensembles.csv."""
    out = Path(outdir)
    for name in ("meta.csv", "measures.csv", "ensembles.csv"):
        if not (out / name).exists():
            raise EvaluationError(f"missing report file: {out / name}")

    meta: dict[str, str] = {}
    notes = []
    for row in _read_csv(out / "meta.csv"):
        if row["key"] == "note":
            notes.append(row["value"])
        else:
            meta[row["key"]] = row["value"]

    def _opt_float(text: str) -> float | None:
        return None if text == "" else float(text)

    def _opt_flag(text: str) -> bool | None:
        return None if text == "" else text == "true"

    measures = tuple(
        MeasureResult(row["measure"], _opt_float(row["rho"]), _opt_float(row["p_value"]))
        for row in _read_csv(out / "measures.csv")
    )
    ensembles = []
    for row in _read_csv(out / "ensembles.csv"):
        flags: CriteriaFlags | None = None
        if row["total"] != "":
            flags = CriteriaFlags(
                total=row["total"] == "true",
                partial=row["partial"] == "true",
                over_mean=row["over_mean"] == "true",
                over_median=row["over_median"] == "true",
            )
        ensembles.append(
            EnsembleResult(
                ensemble=Ensemble(tuple(row["members"].split("+")), row["rule"]),
                rho=_opt_float(row["rho"]),
                p_value=_opt_float(row["p_value"]),
                flags=flags,
                delta_mean=_opt_float(row["delta_mean"]),
                delta_median=_opt_float(row["delta_median"]),
            )
        )
    cardinalities = tuple(
        int(k) for k in meta["cardinalities"].split("+") if k
    )
    return EvaluationReport(
        measures=measures,
        ensembles=tuple(ensembles),
        measure_ids=tuple(meta["measures"].split("+")),
        cardinalities=cardinalities,
        rules=tuple(r for r in meta["rules"].split("+") if r),
        n_pairs=int(meta["n_pairs"]),
        subject_count=int(meta["subject_count"]),
        notes=tuple(notes),
    )
