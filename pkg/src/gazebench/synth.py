"""Synthetic EEG generation for two gaze paradigms with a shared signal model.

Both paradigms record the same kind of subject: a sinusoidal alpha carrier
whose per-channel envelope is lateralized by the horizontal component of the
gaze vector.  They differ only in which gaze vectors occur:

* pro-antisaccade: purely horizontal saccades of fixed eccentricity, so the
  angle is a coin flip between 0 and pi;
* large grid: saccades between consecutive dots of a 25-dot calibration
  grid, giving a multi-modal angle and amplitude distribution.

The signal model (all per-trial quantities in f64, cast to f32 on storage):

    samples[c][t] = g_s * (1 + kappa * m_c * cos(angle) * sat(A))
                        * sin(2*pi*alpha_hz*t/fs + phi_s)
                  + noise_sd * eta[c][t]

where m_c is an antisymmetric channel lateralization map (linspace(-1, 1)
over channels; a single channel gets 0), g_s and phi_s are per-subject gain
and phase, sat(A) = min(A / 300 px, 1), and eta is white Gaussian noise.
The discriminative information therefore lives in the alpha-band envelope
pattern across channels, which is exactly what the feature pipeline extracts.

Every random draw comes from a named stream seeded as
``default_rng([master_seed, subject_id, stream_tag, ...])``, so generation
is a pure function of the config and independent of trial ordering or
parallel scheduling.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from math import atan2, cos, hypot, pi

import numpy as np

from gazebench.datamodel import (
    SCHEMA_VERSION,
    Dataset,
    DatasetInvariantError,
    GazeLabel,
    Manifest,
    Paradigm,
    Trial,
)

PA_ECCENTRICITY_PX = 300.0
AMPLITUDE_SATURATION_PX = 300.0
SCREEN_W, SCREEN_H = 800, 600
GRID_MARGIN_X = 40
GRID_MARGIN_Y = 30
CENTER_REPEATS = 2  # extra center insertions per block: 25 + 2 = 27 dots

# Stream tags for per-subject substreams of the master seed.
_STREAM_SUBJECT = 0
_STREAM_LABELS = 1
_STREAM_NOISE = 2


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs of the synthetic recording model.

    alpha_hz must sit strictly inside the 8-13 Hz analysis band so the
    carrier survives filtering at every configured rate.
    """

    n_subjects: int = 20
    trials_per_subject: int = 200
    n_channels: int = 8
    fs: float = 500.0
    trial_seconds: float = 1.0
    alpha_hz: float = 10.0
    lateralization_gain: float = 0.6
    noise_sd: float = 1.0
    subject_gain_spread: float = 0.2
    master_seed: int = 0

    @property
    def n_samples(self) -> int:
        return int(round(self.trial_seconds * self.fs))

    def validate(self) -> None:
        if self.n_subjects < 1 or self.trials_per_subject < 1 or self.n_channels < 1:
            raise DatasetInvariantError("all counts must be >= 1")
        if not 8.0 < self.alpha_hz < 13.0:
            raise DatasetInvariantError(f"alpha_hz {self.alpha_hz} outside (8, 13)")
        if self.lateralization_gain < 0.0:
            raise DatasetInvariantError("lateralization_gain must be >= 0")
        if self.noise_sd < 0.0 or self.subject_gain_spread < 0.0:
            raise DatasetInvariantError("noise_sd and subject_gain_spread must be >= 0")
        if not self.fs > 26.0:
            raise DatasetInvariantError("fs must exceed 26 Hz")
        if self.n_samples < 2:
            raise DatasetInvariantError("trial window must span at least 2 samples")
        if self.master_seed < 0:
            raise DatasetInvariantError("master_seed must be >= 0")


@dataclass(frozen=True)
class GridLayout:
    """The 25-dot calibration grid on an 800x600 screen."""

    positions: tuple[tuple[float, float], ...]
    center_index: int

    @property
    def center(self) -> tuple[float, float]:
        return self.positions[self.center_index]

    def validate(self) -> None:
        if len(self.positions) != 25:
            raise DatasetInvariantError(f"grid has {len(self.positions)} dots, need 25")
        if len(set(self.positions)) != 25:
            raise DatasetInvariantError("grid dots must be distinct")
        if self.center != (SCREEN_W / 2, SCREEN_H / 2):
            raise DatasetInvariantError(f"center dot {self.center} is not mid-screen")
        pts = set(self.positions)
        for x, y in self.positions:
            if (SCREEN_W - x, y) not in pts or (x, SCREEN_H - y) not in pts:
                raise DatasetInvariantError("grid not reflection-symmetric about center")


def default_grid() -> GridLayout:
    """Uniform 5x5 grid: x in {40,...,760}, y in {30,...,570}, center (400, 300)."""
    xs = np.linspace(GRID_MARGIN_X, SCREEN_W - GRID_MARGIN_X, 5)
    ys = np.linspace(GRID_MARGIN_Y, SCREEN_H - GRID_MARGIN_Y, 5)
    positions = tuple((float(x), float(y)) for x in xs for y in ys)
    layout = GridLayout(positions=positions, center_index=positions.index((400.0, 300.0)))
    layout.validate()
    return layout


def lateralization_map(n_channels: int) -> np.ndarray:
    """Antisymmetric per-channel weights in [-1, 1]; one channel maps to 0."""
    if n_channels == 1:
        return np.zeros(1)
    return np.linspace(-1.0, 1.0, n_channels)


@dataclass(frozen=True)
class SubjectParams:
    subject_id: int
    gain: float
    phase: float


def draw_subject_params(cfg: GeneratorConfig, subject_id: int) -> SubjectParams:
    rng = np.random.default_rng([cfg.master_seed, subject_id, _STREAM_SUBJECT])
    gain = 1.0 + cfg.subject_gain_spread * rng.uniform(-1.0, 1.0)
    phase = rng.uniform(0.0, 2.0 * pi)
    return SubjectParams(subject_id=subject_id, gain=gain, phase=phase)


def pa_trial_labels(n: int, rng: np.random.Generator) -> list[GazeLabel]:
    """n horizontal saccades: angle 0 or pi with probability 1/2, fixed amplitude."""
    if n < 1:
        raise DatasetInvariantError("need at least one trial")
    sides = rng.integers(0, 2, size=n)
    return [
        GazeLabel(angle=pi if s else 0.0, amplitude=PA_ECCENTRICITY_PX) for s in sides
    ]


def lg_trial_labels(
    layout: GridLayout, n_blocks: int, rng: np.random.Generator
) -> list[GazeLabel]:
    """Labels from consecutive-dot saccades of shuffled grid blocks.

    Each block shows the 25 dots in random order with the center dot inserted
    at two extra random slots (27 dots).  Each consecutive pair contributes
    one label: angle = atan2(dy, dx) with y measured downward, amplitude =
    displacement length.  The first dot of a block has no predecessor, and
    center-to-center repeats (zero displacement) are skipped, so a block
    yields 24 to 26 labels.
    """
    if n_blocks < 1:
        raise DatasetInvariantError("need at least one block")
    labels: list[GazeLabel] = []
    for _ in range(n_blocks):
        order = rng.permutation(len(layout.positions))
        seq = [layout.positions[i] for i in order]
        for _ in range(CENTER_REPEATS):
            slot = int(rng.integers(0, len(seq) + 1))
            seq.insert(slot, layout.center)
        for (x1, y1), (x2, y2) in zip(seq, seq[1:]):
            dx, dy = x2 - x1, y2 - y1
            if dx == 0.0 and dy == 0.0:
                continue
            labels.append(GazeLabel(angle=atan2(dy, dx), amplitude=hypot(dx, dy)))
    return labels


def synthesize_trial(
    label: GazeLabel,
    params: SubjectParams,
    cfg: GeneratorConfig,
    paradigm: Paradigm,
    rng: np.random.Generator,
) -> Trial:
    """Render one trial's multi-channel window from the signal model."""
    label.validate()
    t = np.arange(cfg.n_samples) / cfg.fs
    carrier = np.sin(2.0 * pi * cfg.alpha_hz * t + params.phase)
    sat = min(label.amplitude / AMPLITUDE_SATURATION_PX, 1.0)
    depth = cfg.lateralization_gain * lateralization_map(cfg.n_channels) * cos(label.angle) * sat
    clean = params.gain * (1.0 + depth)[:, None] * carrier[None, :]
    samples = clean + cfg.noise_sd * rng.standard_normal((cfg.n_channels, cfg.n_samples))
    return Trial(
        subject_id=params.subject_id,
        paradigm=paradigm,
        label=label,
        samples=samples,
        fs=cfg.fs,
    )


def subject_labels(
    paradigm: Paradigm, cfg: GeneratorConfig, subject_id: int
) -> list[GazeLabel]:
    """The subject's trial label sequence, truncated to trials_per_subject."""
    rng = np.random.default_rng([cfg.master_seed, subject_id, _STREAM_LABELS])
    if paradigm is Paradigm.PRO_ANTISACCADE:
        return pa_trial_labels(cfg.trials_per_subject, rng)
    layout = default_grid()
    labels: list[GazeLabel] = []
    while len(labels) < cfg.trials_per_subject:
        labels.extend(lg_trial_labels(layout, 1, rng))
    return labels[: cfg.trials_per_subject]


def config_hash(paradigm: Paradigm, cfg: GeneratorConfig) -> str:
    """Stable short hash of the full generation config, for manifests."""
    payload = {"paradigm": paradigm.label, **asdict(cfg)}
    blob = json.dumps(payload, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


def generate_dataset(paradigm: Paradigm, cfg: GeneratorConfig) -> Dataset:
    """All subjects' trials under one paradigm; a pure function of cfg.

    Per-trial noise streams are keyed by (master_seed, subject_id, trial
    index), so the result does not depend on generation order.
    """
    cfg.validate()
    trials = []
    for subject_id in range(cfg.n_subjects):
        params = draw_subject_params(cfg, subject_id)
        for idx, label in enumerate(subject_labels(paradigm, cfg, subject_id)):
            noise_rng = np.random.default_rng(
                [cfg.master_seed, subject_id, _STREAM_NOISE, idx]
            )
            trials.append(synthesize_trial(label, params, cfg, paradigm, noise_rng))
    manifest = Manifest(
        schema_version=SCHEMA_VERSION,
        fs=cfg.fs,
        n_channels=cfg.n_channels,
        paradigm=paradigm,
        config_hash=config_hash(paradigm, cfg),
    )
    return Dataset(manifest=manifest, trials=tuple(trials))
