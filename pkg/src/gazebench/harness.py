"""Experiment harness: subject-level splits, the 4-way paradigm matrix, gaps.

The central object is the result matrix: train/test combos {PA-PA, LG-LG,
PA-LG, LG-PA} crossed with the classifier panel, each cell holding the mean
and population standard deviation of accuracy over training seeds 1..n plus
mean wall time and a convergence flag.  Cross-paradigm cells train on one
paradigm's train split and evaluate on the other paradigm's held-out test
split, so all four accuracies per model are measured on subject-disjoint,
identically constructed test sets.

Training depends only on (train split features, model kind, seed); each cell
pair sharing a train slot therefore shares its trained models, and swapping
the two input datasets exactly swaps the PA-LG and LG-PA cells.

Wall times are inherently nondeterministic, so the canonical results CSV
redacts the time column by default (see write_results_csv); real timings
always go to the sidecar written by write_timings_csv.
"""
from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np

from gazebench import dsp, ml
from gazebench.datamodel import Dataset, DatasetInvariantError
from gazebench.labels import relabel_dataset

COMBOS = ("PA-PA", "LG-LG", "PA-LG", "LG-PA")
RESULTS_HEADER = ["combo", "model", "mean_acc", "std", "mean_time_s", "converged"]


@dataclass(frozen=True)
class SplitSpec:
    """Subject-level 70/15/15 partition controlled by one shuffle seed."""

    train_frac: float = 0.70
    cv_frac: float = 0.15
    test_frac: float = 0.15
    split_seed: int = 0

    def validate(self) -> None:
        fracs = [self.train_frac, self.cv_frac, self.test_frac]
        if any(f <= 0.0 for f in fracs):
            raise DatasetInvariantError("all split fractions must be > 0")
        if sum(Fraction(str(f)) for f in fracs) != 1:
            raise DatasetInvariantError(f"split fractions {fracs} do not sum to 1")

    def part_sizes(self, n_subjects: int) -> tuple[int, int, int]:
        """Exact floor arithmetic on the decimal fractions (no float floors)."""
        n_train = floor(Fraction(str(self.train_frac)) * n_subjects)
        n_cv = floor(Fraction(str(self.cv_frac)) * n_subjects)
        return n_train, n_cv, n_subjects - n_train - n_cv


def split_by_subject(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset]:
    """Partition a dataset into (train, cv, test) with whole subjects per part.

    Subjects are shuffled by split_seed and dealt in order: the first
    floor(train_frac * S) to train, the next floor(cv_frac * S) to cv, the
    remainder to test.  Every trial follows its subject.
    """
    spec.validate()
    subjects = ds.subjects
    if len(subjects) < 3:
        raise DatasetInvariantError(f"need >= 3 subjects to split, have {len(subjects)}")
    order = np.random.default_rng(spec.split_seed).permutation(len(subjects))
    shuffled = [subjects[i] for i in order]
    n_train, n_cv, _ = spec.part_sizes(len(subjects))
    groups = (
        set(shuffled[:n_train]),
        set(shuffled[n_train : n_train + n_cv]),
        set(shuffled[n_train + n_cv :]),
    )
    return tuple(
        ds.with_trials(t for t in ds.trials if t.subject_id in group)
        for group in groups
    )


def featurize_dataset(ds: Dataset, filter_spec: dsp.FilterSpec | None = None) -> ml.LabeledMatrix:
    """Relabel, run the feature pipeline, and stack into a LabeledMatrix."""
    labeled = relabel_dataset(ds)
    if filter_spec is None:
        filter_spec = dsp.FilterSpec.for_rate(ds.manifest.fs)
    return ml.labeled_matrix_from_features(dsp.dataset_features(labeled, filter_spec))


@dataclass(frozen=True)
class ResultCell:
    combo: str
    model: ml.ModelKind
    mean_acc: float
    std_acc: float
    mean_time_s: float
    converged: bool
    n_seeds: int

    def validate(self) -> None:
        if not 0.0 <= self.mean_acc <= 1.0:
            raise ValueError(f"mean accuracy {self.mean_acc} outside [0, 1]")
        if self.std_acc < 0.0:
            raise ValueError("std must be >= 0")


def run_cell(
    train_data: ml.LabeledMatrix,
    test_data: ml.LabeledMatrix,
    kind: ml.ModelKind,
    hp=None,
    n_seeds: int = 5,
    combo: str = "",
) -> ResultCell:
    """Train with seeds 1..n_seeds and evaluate; aggregate into one cell.

    Time per seed is training plus evaluation wall time; std is the
    population standard deviation over seeds.
    """
    accs, times, converged = [], [], True
    for seed in range(1, n_seeds + 1):
        model = ml.train(kind, train_data, hp=hp, seed=seed)
        start = time.perf_counter()
        accs.append(ml.predict_accuracy(model, test_data))
        times.append(model.train_seconds + (time.perf_counter() - start))
        converged = converged and model.converged
    cell = ResultCell(
        combo=combo,
        model=kind,
        mean_acc=float(np.mean(accs)),
        std_acc=float(np.std(accs)),
        mean_time_s=float(np.mean(times)),
        converged=converged,
        n_seeds=n_seeds,
    )
    cell.validate()
    return cell


@dataclass(frozen=True)
class ResultMatrix:
    """All combo x model cells in canonical order, plus provenance."""

    cells: tuple[ResultCell, ...]
    kinds: tuple[ml.ModelKind, ...]
    n_seeds: int
    config_hash: str

    def cell(self, combo: str, kind: ml.ModelKind) -> ResultCell:
        for c in self.cells:
            if c.combo == combo and c.model is kind:
                return c
        raise KeyError((combo, kind))

    def validate(self) -> None:
        want = [(combo, kind) for combo in COMBOS for kind in self.kinds]
        have = [(c.combo, c.model) for c in self.cells]
        if have != want:
            raise ValueError("matrix must hold all combos x models in canonical order")
        for c in self.cells:
            c.validate()


def _train_job(args):
    kind_name, X, y, subject_ids, hp, seed = args
    data = ml.LabeledMatrix(X=X, y=y, subject_ids=subject_ids)
    return ml.train(ml.ModelKind[kind_name], data, hp=hp, seed=seed)


def matrix_config_hash(pa_ds, lg_ds, split, kinds, n_seeds: int) -> str:
    payload = {
        "pa": pa_ds.manifest.config_hash,
        "lg": lg_ds.manifest.config_hash,
        "split": [split.train_frac, split.cv_frac, split.test_frac, split.split_seed],
        "models": [k.name for k in kinds],
        "n_seeds": n_seeds,
    }
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def run_matrix(
    pa_ds: Dataset,
    lg_ds: Dataset,
    split: SplitSpec | None = None,
    kinds=None,
    hps: dict | None = None,
    n_seeds: int = 5,
    filter_spec: dsp.FilterSpec | None = None,
    threads: int = 1,
) -> ResultMatrix:
    """Fill the 4-combo x model matrix from two raw datasets.

    Models are trained once per (train paradigm, kind, seed) and evaluated on
    both test splits; with `threads > 1` the training jobs run in worker
    processes, reduced in fixed order so results match the serial run
    bit for bit.
    """
    split = split or SplitSpec()
    kinds = tuple(kinds) if kinds else tuple(ml.ModelKind)
    hps = hps or {}
    if pa_ds.manifest.n_channels != lg_ds.manifest.n_channels:
        raise DatasetInvariantError("datasets differ in channel count")

    slots = {"PA": pa_ds, "LG": lg_ds}
    train_feats, test_feats = {}, {}
    for slot, ds in slots.items():
        train_part, _, test_part = split_by_subject(ds, split)
        train_feats[slot] = featurize_dataset(train_part, filter_spec)
        test_feats[slot] = featurize_dataset(test_part, filter_spec)

    jobs = [
        (slot, kind, seed)
        for slot in ("PA", "LG")
        for kind in kinds
        for seed in range(1, n_seeds + 1)
    ]
    payloads = [
        (
            kind.name,
            train_feats[slot].X,
            train_feats[slot].y,
            train_feats[slot].subject_ids,
            hps.get(kind),
            seed,
        )
        for slot, kind, seed in jobs
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            trained = list(pool.map(_train_job, payloads))
    else:
        trained = [_train_job(p) for p in payloads]
    models = {key: model for key, model in zip(jobs, trained)}

    cells = []
    for combo in COMBOS:
        train_slot, test_slot = combo.split("-")
        for kind in kinds:
            accs, times, converged = [], [], True
            for seed in range(1, n_seeds + 1):
                model = models[(train_slot, kind, seed)]
                start = time.perf_counter()
                accs.append(ml.predict_accuracy(model, test_feats[test_slot]))
                times.append(model.train_seconds + (time.perf_counter() - start))
                converged = converged and model.converged
            cells.append(
                ResultCell(
                    combo=combo,
                    model=kind,
                    mean_acc=float(np.mean(accs)),
                    std_acc=float(np.std(accs)),
                    mean_time_s=float(np.mean(times)),
                    converged=converged,
                    n_seeds=n_seeds,
                )
            )
    matrix = ResultMatrix(
        cells=tuple(cells),
        kinds=kinds,
        n_seeds=n_seeds,
        config_hash=matrix_config_hash(pa_ds, lg_ds, split, kinds, n_seeds),
    )
    matrix.validate()
    return matrix


@dataclass(frozen=True)
class GapStats:
    """Accuracy drops after covariate shift, per model and averaged.

    drop_PA = acc(PA-PA) - acc(PA-LG): how much a PA-trained model loses on
    shifted data; drop_LG likewise for LG-trained models.  gap > 0 means
    models trained on the fine-grain paradigm degrade less.
    """

    per_model: dict
    avg_drop_pa: float
    avg_drop_lg: float

    @property
    def gap(self) -> float:
        return self.avg_drop_pa - self.avg_drop_lg


def robustness_gap(matrix: ResultMatrix, kinds=None) -> GapStats:
    """Gap statistics over ``kinds`` (default: every model in the matrix)."""
    per_model = {}
    for kind in kinds if kinds is not None else matrix.kinds:
        drop_pa = matrix.cell("PA-PA", kind).mean_acc - matrix.cell("PA-LG", kind).mean_acc
        drop_lg = matrix.cell("LG-LG", kind).mean_acc - matrix.cell("LG-PA", kind).mean_acc
        per_model[kind.value] = (drop_pa, drop_lg)
    drops = list(per_model.values())
    return GapStats(
        per_model=per_model,
        avg_drop_pa=float(np.mean([d[0] for d in drops])),
        avg_drop_lg=float(np.mean([d[1] for d in drops])),
    )


def _format_std(cell: ResultCell) -> str:
    return "N/A" if not cell.converged else repr(cell.std_acc)


def write_results_csv(matrix: ResultMatrix, path, include_timings: bool = False) -> None:
    """Canonical CSV: one row per combo x model in matrix order.

    The mean_time_s column is left empty unless include_timings is set,
    keeping the file byte-identical across reruns; timings live in the
    sidecar from write_timings_csv.  Non-converged cells report std as N/A.
    """
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={matrix.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for cell in matrix.cells:
            writer.writerow(
                [
                    cell.combo,
                    cell.model.value,
                    repr(cell.mean_acc),
                    _format_std(cell),
                    repr(cell.mean_time_s) if include_timings else "",
                    "true" if cell.converged else "false",
                ]
            )


def write_timings_csv(matrix: ResultMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# config_hash={matrix.config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(["combo", "model", "mean_time_s"])
        for cell in matrix.cells:
            writer.writerow([cell.combo, cell.model.value, repr(cell.mean_time_s)])
