"""Command-line interface.

Subcommands cover the full workflow: ``synth`` writes a binary dataset,
``featurize`` turns one into a feature CSV, ``matrix`` runs the four-way
train/test study and writes results.csv / tables.md / gap.txt, and
``report`` re-renders tables from an existing results.csv.

Exit codes: 0 success, 2 usage or configuration errors (bad flag values,
invalid generator settings, malformed result CSVs), 3 I/O failures
(missing or corrupt input files, unwritable outputs).  No partial output
file is left behind when a command fails.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from gazebench import datamodel, dsp, harness, labels, ml, report, synth

OUTPUT_DIR_ENV = "GAZEBENCH_OUT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

_MODEL_ALIASES = {
    "tree": ml.ModelKind.DECISION_TREE,
    "dt": ml.ModelKind.DECISION_TREE,
    "forest": ml.ModelKind.RANDOM_FOREST,
    "rf": ml.ModelKind.RANDOM_FOREST,
    "gboost": ml.ModelKind.GRADIENT_BOOST,
    "gbm": ml.ModelKind.GRADIENT_BOOST,
    "xgb": ml.ModelKind.XGBOOST_STYLE,
    "ada": ml.ModelKind.ADABOOST,
    "gnb": ml.ModelKind.GAUSSIAN_NB,
    "linsvc": ml.ModelKind.LINEAR_SVC,
    "rbfsvc": ml.ModelKind.RBF_SVC,
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return value


def _nonnegative_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return value


def parse_model_list(text: str) -> list[ml.ModelKind]:
    """Comma-separated model names or aliases, e.g. ``xgb,gnb``."""
    by_value = {kind.value.lower(): kind for kind in ml.ModelKind}
    kinds = []
    for token in text.split(","):
        token = token.strip()
        key = token.lower().replace(" ", "")
        kind = _MODEL_ALIASES.get(key) or by_value.get(token.lower())
        if kind is None:
            choices = ", ".join(sorted(_MODEL_ALIASES))
            raise ValueError(f"unknown model {token!r} (choose from: {choices})")
        if kind not in kinds:
            kinds.append(kind)
    if not kinds:
        raise ValueError("no models selected")
    return kinds


def _default_outdir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, ".")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gazebench",
        description="Synthetic EEG left/right gaze classification benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset file")
    p_synth.add_argument("--paradigm", choices=["pa", "lg"], required=True,
                         help="pro/antisaccade (pa) or large grid (lg)")
    p_synth.add_argument("--subjects", type=_positive_int, default=20)
    p_synth.add_argument("--trials", type=_positive_int, default=200,
                         help="trials per subject")
    p_synth.add_argument("--channels", type=_positive_int, default=8)
    p_synth.add_argument("--fs", type=_positive_float, default=500.0,
                         help="sampling rate in Hz")
    p_synth.add_argument("--seconds", type=_positive_float, default=1.0,
                         help="trial length in seconds")
    p_synth.add_argument("--alpha-hz", type=_positive_float, default=10.0)
    p_synth.add_argument("--kappa", type=_nonnegative_float, default=0.6,
                         help="lateralization gain")
    p_synth.add_argument("--noise-sd", type=_nonnegative_float, default=1.0)
    p_synth.add_argument("--gain-spread", type=_nonnegative_float, default=0.2)
    p_synth.add_argument("--seed", type=_nonnegative_int, default=0,
                         help="master seed")
    p_synth.add_argument("-o", "--out", required=True, help="output dataset path")
    p_synth.set_defaults(func=cmd_synth)

    p_feat = sub.add_parser("featurize", help="extract band-power features to CSV")
    p_feat.add_argument("dataset", help="input dataset path")
    p_feat.add_argument("-o", "--out", required=True, help="output CSV path")
    p_feat.add_argument("--low-hz", type=_positive_float, default=dsp.BAND_LOW_HZ)
    p_feat.add_argument("--high-hz", type=_positive_float, default=dsp.BAND_HIGH_HZ)
    p_feat.add_argument("--taps", type=_positive_int, default=None,
                        help="filter length (default scales with fs)")
    p_feat.set_defaults(func=cmd_featurize)

    p_matrix = sub.add_parser("matrix", help="run the four-way train/test study")
    p_matrix.add_argument("--pa", required=True, help="pro/antisaccade dataset path")
    p_matrix.add_argument("--lg", required=True, help="large-grid dataset path")
    p_matrix.add_argument("-o", "--outdir", default=None,
                          help=f"output directory (default ${OUTPUT_DIR_ENV} or .)")
    p_matrix.add_argument("--models", default=None,
                          help="comma-separated subset, e.g. xgb,gnb (default all)")
    p_matrix.add_argument("--n-seeds", type=_positive_int, default=5,
                          help="training repetitions per cell")
    p_matrix.add_argument("--split-seed", type=_nonnegative_int, default=0)
    p_matrix.add_argument("--threads", type=_positive_int, default=1,
                          help="worker processes for training")
    p_matrix.add_argument("--timings", action="store_true",
                          help="include wall-clock times in results.csv")
    p_matrix.set_defaults(func=cmd_matrix)

    p_report = sub.add_parser("report", help="render tables from a results CSV")
    p_report.add_argument("results", help="results.csv path")
    p_report.add_argument("-o", "--out", default=None, help="optional Markdown path")
    p_report.set_defaults(func=cmd_report)

    return parser


def cmd_synth(args) -> int:
    cfg = synth.GeneratorConfig(
        n_subjects=args.subjects,
        trials_per_subject=args.trials,
        n_channels=args.channels,
        fs=args.fs,
        trial_seconds=args.seconds,
        alpha_hz=args.alpha_hz,
        lateralization_gain=args.kappa,
        noise_sd=args.noise_sd,
        subject_gain_spread=args.gain_spread,
        master_seed=args.seed,
    )
    cfg.validate()
    paradigm = (datamodel.Paradigm.PRO_ANTISACCADE if args.paradigm == "pa"
                else datamodel.Paradigm.LARGE_GRID)
    dataset = synth.generate_dataset(paradigm, cfg)
    datamodel.write_dataset(dataset, args.out)
    print(f"wrote {args.out}: {len(dataset.trials)} trials, "
          f"{len(dataset.subjects)} subjects, paradigm={paradigm.label}, "
          f"config_hash={dataset.manifest.config_hash}")
    return EXIT_OK


def cmd_featurize(args) -> int:
    dataset = labels.relabel_dataset(datamodel.read_dataset(args.dataset))
    fs = dataset.manifest.fs
    if args.taps is None:
        spec = dsp.FilterSpec.for_rate(fs, low_hz=args.low_hz, high_hz=args.high_hz)
    else:
        spec = dsp.FilterSpec(fs=fs, low_hz=args.low_hz, high_hz=args.high_hz,
                              taps=args.taps)
    spec.validate()
    features = dsp.dataset_features(dataset, spec)
    dsp.write_features_csv(features, dataset.manifest.n_channels, args.out,
                           config_hash=dataset.manifest.config_hash)
    print(f"wrote {args.out}: {len(features)} rows, "
          f"{3 * dataset.manifest.n_channels} feature columns")
    return EXIT_OK


def cmd_matrix(args) -> int:
    kinds = parse_model_list(args.models) if args.models else None
    pa = datamodel.read_dataset(args.pa)
    lg = datamodel.read_dataset(args.lg)
    split = harness.SplitSpec(split_seed=args.split_seed)
    matrix = harness.run_matrix(pa, lg, split=split, kinds=kinds,
                                n_seeds=args.n_seeds, threads=args.threads)

    outdir = Path(args.outdir if args.outdir is not None else _default_outdir())
    outdir.mkdir(parents=True, exist_ok=True)
    results_path = outdir / "results.csv"
    harness.write_results_csv(matrix, results_path, include_timings=args.timings)
    harness.write_timings_csv(matrix, outdir / "timings.csv")

    rows = report.read_results_rows(results_path)
    markdown = report.render_report(rows, config_hash=matrix.config_hash)
    (outdir / "tables.md").write_text(markdown)
    gap_text = report.render_gap_lines(rows)
    (outdir / "gap.txt").write_text(gap_text + "\n" if gap_text else "")

    print(f"wrote {results_path}, {outdir / 'tables.md'}, "
          f"{outdir / 'gap.txt'}, {outdir / 'timings.csv'}")
    summary = report.render_summary_table(rows)
    if summary:
        print()
        print(summary)
    if gap_text:
        print()
        print(gap_text)
    return EXIT_OK


def cmd_report(args) -> int:
    rows = report.read_results_rows(args.results)
    markdown = report.render_report(
        rows, config_hash=report.read_config_hash(args.results))
    if args.out:
        Path(args.out).write_text(markdown)
    print(markdown, end="")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except datamodel.DatasetFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (datamodel.DatasetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entrypoint() -> None:
    sys.exit(main())
