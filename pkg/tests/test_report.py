"""Decimal display arithmetic and Markdown rendering."""
import csv

import pytest

from gazebench import report
from gazebench.harness import COMBOS, RESULTS_HEADER

# Published benchmark grid used as a rendering oracle: the column averages
# and drop lines below are fixed by construction of these 32 accuracies.
REFERENCE_GRID = {
    "XGBoost":       ("0.979", "0.955", "0.934", "0.965"),
    "GradientBoost": ("0.974", "0.956", "0.921", "0.960"),
    "RandomForest":  ("0.965", "0.946", "0.912", "0.950"),
    "AdaBoost":      ("0.963", "0.935", "0.910", "0.950"),
    "DecisionTree":  ("0.962", "0.920", "0.884", "0.919"),
    "LinearSVC":     ("0.920", "0.920", "0.914", "0.908"),
    "RBF SVC":       ("0.894", "0.889", "0.872", "0.863"),
    "GaussianNB":    ("0.877", "0.872", "0.854", "0.837"),
}


def write_reference_csv(path, include_std=True):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for i, combo in enumerate(COMBOS):
            for model, accs in REFERENCE_GRID.items():
                writer.writerow([combo, model, accs[i],
                                 "0.004" if include_std else "N/A", "", "true"])
    return path


@pytest.fixture
def reference_csv(tmp_path):
    return write_reference_csv(tmp_path / "results.csv")


def test_summary_averages_exact(reference_csv):
    rows = report.read_results_rows(reference_csv)
    md = report.render_report(rows)
    avg = next(l for l in md.splitlines() if l.startswith("| Average"))
    assert avg == "| Average | 94.2 | 92.4 | 90.0 | 91.9 |"


def test_drop_lines_exact(reference_csv):
    rows = report.read_results_rows(reference_csv)
    md = report.render_report(rows)
    assert "Average drop, PA-trained (PA-PA minus PA-LG): 4.2 pp" in md
    assert "Average drop, LG-trained (LG-LG minus LG-PA): 0.5 pp" in md
    assert "Robustness gap (PA drop minus LG drop): 3.7 pp" in md


def test_tables_sorted_descending(reference_csv):
    rows = report.read_results_rows(reference_csv)
    md = report.render_report(rows)
    lines = md.splitlines()
    start = lines.index("## PA-PA")
    body = [l for l in lines[start + 2:start + 14] if l.startswith("| ") and
            "Model" not in l and "---" not in l]
    accs = [float(l.split("|")[2]) for l in body]
    assert accs == sorted(accs, reverse=True)
    assert body[0].split("|")[1].strip() == "XGBoost"


def test_tie_sorted_alphabetically(reference_csv):
    # LG-LG has DecisionTree and LinearSVC tied at 92.0
    rows = report.read_results_rows(reference_csv)
    md = report.render_report(rows)
    lines = md.splitlines()
    start = lines.index("## LG-LG")
    names = [l.split("|")[1].strip() for l in lines[start + 4:start + 12]]
    assert names.index("DecisionTree") < names.index("LinearSVC")


def test_half_up_rounding():
    # 0.15 pp boundaries round away from zero, not to even
    assert report._q(report._pct("0.9415")) == "94.2"
    assert report._q(report._pct("0.9425")) == "94.3"
    assert report._q(report._pct("0.89999")) == "90.0"


def test_read_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("not,a,results,file\n")
    with pytest.raises(report.ReportError):
        report.read_results_rows(bad)

    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(RESULTS_HEADER) + "\n")
    with pytest.raises(report.ReportError):
        report.read_results_rows(empty)

    short_row = tmp_path / "short.csv"
    short_row.write_text(",".join(RESULTS_HEADER) + "\nPA-PA,DecisionTree,0.9\n")
    with pytest.raises(report.ReportError):
        report.read_results_rows(short_row)

    bad_combo = tmp_path / "combo.csv"
    bad_combo.write_text(
        ",".join(RESULTS_HEADER) + "\nXX-YY,DecisionTree,0.9,0.0,,true\n")
    with pytest.raises(report.ReportError):
        report.read_results_rows(bad_combo)

    bad_acc = tmp_path / "acc.csv"
    bad_acc.write_text(
        ",".join(RESULTS_HEADER) + "\nPA-PA,DecisionTree,oops,0.0,,true\n")
    with pytest.raises(report.ReportError):
        report.read_results_rows(bad_acc)


def test_partial_grid_renders_without_summary(tmp_path):
    path = tmp_path / "partial.csv"
    path.write_text(",".join(RESULTS_HEADER)
                    + "\nPA-PA,DecisionTree,0.9,0.0,,true\n")
    rows = report.read_results_rows(path)
    md = report.render_report(rows)
    assert "## PA-PA" in md
    assert "## Summary" not in md
    assert "Robustness gap" not in md


def test_nonconverged_std_na(tmp_path):
    path = tmp_path / "na.csv"
    path.write_text(",".join(RESULTS_HEADER)
                    + "\nPA-PA,LinearSVC,0.9,N/A,,false\n")
    rows = report.read_results_rows(path)
    md = report.render_report(rows)
    assert "| LinearSVC | 90.0 | N/A | N/A |" in md


def test_config_hash_passthrough(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("# config_hash=deadbeef\n" + ",".join(RESULTS_HEADER)
                    + "\nPA-PA,DecisionTree,0.9,0.0,,true\n")
    assert report.read_config_hash(path) == "deadbeef"
    md = report.render_report(report.read_results_rows(path),
                              config_hash="deadbeef")
    assert "config_hash: deadbeef" in md
