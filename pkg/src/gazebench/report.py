"""Markdown rendering of result CSVs with exact decimal display arithmetic.

All displayed numbers are derived from the CSV's string fields using
Decimal, so table averages and drop figures are exact half-up roundings of
the stored values rather than artifacts of binary float summation.
Accuracies are stored as fractions in [0, 1] and displayed as percentages
with one decimal.
"""
from __future__ import annotations

import csv
from decimal import ROUND_HALF_UP, Decimal

from gazebench.harness import COMBOS, RESULTS_HEADER

TENTH = Decimal("0.1")
HUNDREDTH = Decimal("0.01")


class ReportError(ValueError):
    """The results CSV cannot be rendered (malformed, empty, wrong header)."""


def read_results_rows(path) -> list[dict]:
    """Rows of a results CSV as string dicts (numbers left unparsed)."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(line for line in fh if not line.startswith("#"))
            header = next(reader, None)
            if header != RESULTS_HEADER:
                raise ReportError(f"{path}: expected header {RESULTS_HEADER}, got {header}")
            rows = []
            for row in reader:
                if len(row) != len(RESULTS_HEADER):
                    raise ReportError(f"{path}: malformed row {row!r}")
                rows.append(dict(zip(RESULTS_HEADER, row)))
    except csv.Error as exc:
        raise ReportError(f"{path}: {exc}")
    if not rows:
        raise ReportError(f"{path}: no result rows")
    for row in rows:
        try:
            Decimal(row["mean_acc"])
        except ArithmeticError:
            raise ReportError(f"{path}: bad accuracy {row['mean_acc']!r}")
        if row["combo"] not in COMBOS:
            raise ReportError(f"{path}: unknown combo {row['combo']!r}")
    return rows


def _pct(fraction_text: str) -> Decimal:
    return Decimal(fraction_text) * 100


def _q(value: Decimal, grain: Decimal = TENTH) -> str:
    return str(value.quantize(grain, rounding=ROUND_HALF_UP))


def _mean(values: list[Decimal]) -> Decimal:
    return sum(values) / len(values)


def _std_text(row: dict) -> str:
    if row["std"] == "N/A":
        return "N/A"
    return _q(_pct(row["std"]), HUNDREDTH)


def _time_text(row: dict) -> str:
    if not row["mean_time_s"]:
        return "N/A"
    return _q(Decimal(row["mean_time_s"]), Decimal("0.001"))


def _sorted_by_accuracy(rows: list[dict]) -> list[dict]:
    # Descending accuracy; exact ties keep alphabetical model order.
    by_name = sorted(rows, key=lambda r: r["model"])
    return sorted(by_name, key=lambda r: Decimal(r["mean_acc"]), reverse=True)


def render_combo_table(combo: str, rows: list[dict]) -> str:
    lines = [
        f"## {combo}",
        "",
        "| Model | Accuracy (%) | Std (pp) | Mean time (s) |",
        "|---|---|---|---|",
    ]
    for row in _sorted_by_accuracy(rows):
        lines.append(
            f"| {row['model']} | {_q(_pct(row['mean_acc']))} "
            f"| {_std_text(row)} | {_time_text(row)} |"
        )
    return "\n".join(lines)


def _pivot(rows: list[dict]) -> dict[str, dict[str, str]]:
    table: dict[str, dict[str, str]] = {}
    for row in rows:
        table.setdefault(row["model"], {})[row["combo"]] = row["mean_acc"]
    return table


def _full_models(rows: list[dict]) -> dict[str, dict[str, str]]:
    return {
        model: accs
        for model, accs in _pivot(rows).items()
        if all(combo in accs for combo in COMBOS)
    }


def render_summary_table(rows: list[dict]) -> str:
    """Table-of-tables: one row per model with all four combos, plus averages."""
    table = _full_models(rows)
    if not table:
        return ""
    order = sorted(table)
    order.sort(key=lambda m: Decimal(table[m]["PA-PA"]), reverse=True)
    lines = [
        "## Summary (accuracy %)",
        "",
        "| Model | " + " | ".join(COMBOS) + " |",
        "|---|" + "---|" * len(COMBOS),
    ]
    for model in order:
        cells = " | ".join(_q(_pct(table[model][c])) for c in COMBOS)
        lines.append(f"| {model} | {cells} |")
    averages = " | ".join(
        _q(_mean([_pct(table[m][c]) for m in order])) for c in COMBOS
    )
    lines.append(f"| Average | {averages} |")
    return "\n".join(lines)


def render_gap_lines(rows: list[dict]) -> str:
    """Per-model and average accuracy drops after the paradigm swap."""
    table = _full_models(rows)
    if not table:
        return ""
    order = sorted(table)
    drops_pa, drops_lg = [], []
    lines = [
        "## Covariate-shift drops",
        "",
        "| Model | Drop after PA training (pp) | Drop after LG training (pp) |",
        "|---|---|---|",
    ]
    for model in order:
        acc = table[model]
        d_pa = _pct(acc["PA-PA"]) - _pct(acc["PA-LG"])
        d_lg = _pct(acc["LG-LG"]) - _pct(acc["LG-PA"])
        drops_pa.append(d_pa)
        drops_lg.append(d_lg)
        lines.append(f"| {model} | {_q(d_pa)} | {_q(d_lg)} |")
    avg_pa, avg_lg = _mean(drops_pa), _mean(drops_lg)
    lines += [
        "",
        f"Average drop, PA-trained (PA-PA minus PA-LG): {_q(avg_pa)} pp",
        f"Average drop, LG-trained (LG-LG minus LG-PA): {_q(avg_lg)} pp",
        f"Robustness gap (PA drop minus LG drop): {_q(avg_pa - avg_lg)} pp",
    ]
    return "\n".join(lines)


def render_report(rows: list[dict], config_hash: str = "") -> str:
    """Full Markdown report: four per-combo tables, summary grid, drops."""
    sections = ["# Left-right classification results"]
    if config_hash:
        sections.append(f"config_hash: {config_hash}")
    for combo in COMBOS:
        combo_rows = [r for r in rows if r["combo"] == combo]
        if combo_rows:
            sections.append(render_combo_table(combo, combo_rows))
    summary = render_summary_table(rows)
    if summary:
        sections.append(summary)
    gaps = render_gap_lines(rows)
    if gaps:
        sections.append(gaps)
    return "\n\n".join(sections) + "\n"


def read_config_hash(path) -> str:
    with open(path) as fh:
        first = fh.readline()
    if first.startswith("# config_hash="):
        return first.split("=", 1)[1].strip()
    return ""
