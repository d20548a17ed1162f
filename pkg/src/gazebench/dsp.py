"""Alpha-band feature pipeline: FIR band-pass, analytic signal, features.

Each trial channel is band-pass filtered to 8-13 Hz with a linear-phase
windowed-sinc FIR (zero-phase by symmetric edge padding), converted to its
analytic signal in the frequency domain, and summarized on the interior 80%
of samples by three numbers: mean envelope, and the circular-mean phase as
an (x, y) resultant pair.  The pair encodes mean phase without the +/-pi
wraparound and its length doubles as a phase-stability measure.

Everything here is a deterministic, stateless transform; trials and
channels may be processed in any order or in parallel.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from gazebench.datamodel import Dataset, Direction, Trial

BAND_LOW_HZ = 8.0
BAND_HIGH_HZ = 13.0
REFERENCE_TAPS = 257      # at the reference rate below; scaled for other rates
REFERENCE_FS = 500.0
INTERIOR_FRACTION = 0.8   # central share of samples used for statistics

FEATURES_PER_CHANNEL = 3


class SignalTooShortError(ValueError):
    """Input series shorter than the transform requires."""


@dataclass(frozen=True)
class FilterSpec:
    """Linear-phase Hamming windowed-sinc band-pass description."""

    fs: float
    low_hz: float = BAND_LOW_HZ
    high_hz: float = BAND_HIGH_HZ
    taps: int = REFERENCE_TAPS

    def validate(self) -> None:
        if not 0.0 < self.low_hz < self.high_hz < self.fs / 2.0:
            raise ValueError(
                f"need 0 < low ({self.low_hz}) < high ({self.high_hz}) "
                f"< fs/2 ({self.fs / 2.0})"
            )
        if self.taps % 2 != 1 or self.taps < 3:
            raise ValueError(f"taps must be odd and >= 3, got {self.taps}")

    @classmethod
    def for_rate(cls, fs: float, low_hz: float = BAND_LOW_HZ, high_hz: float = BAND_HIGH_HZ):
        """Spec with tap count scaled to keep transition width fixed in Hz."""
        taps = int(round(REFERENCE_TAPS * fs / REFERENCE_FS))
        if taps % 2 == 0:
            taps += 1
        spec = cls(fs=fs, low_hz=low_hz, high_hz=high_hz, taps=max(taps, 3))
        spec.validate()
        return spec


def _windowed_sinc_lowpass(taps: int, cutoff_norm: float) -> np.ndarray:
    # Hamming-windowed sinc, normalized to exactly unit DC gain.
    m = np.arange(taps) - (taps - 1) / 2.0
    h = 2.0 * cutoff_norm * np.sinc(2.0 * cutoff_norm * m)
    h *= np.hamming(taps)
    return h / h.sum()


def design_bandpass(spec: FilterSpec) -> np.ndarray:
    """Band-pass FIR coefficients as a difference of two unit-DC lowpasses.

    The construction makes the DC gain the difference of two exact ones, so
    |sum(coeffs)| is at the rounding floor rather than a design compromise.
    """
    spec.validate()
    high = _windowed_sinc_lowpass(spec.taps, spec.high_hz / spec.fs)
    low = _windowed_sinc_lowpass(spec.taps, spec.low_hz / spec.fs)
    return high - low


def filter_signal(x: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Zero-phase FIR filtering along the last axis, output length preserved.

    The input is extended by (taps-1)/2 reflected samples on each side and
    convolved in 'valid' mode, which cancels the linear-phase delay of the
    symmetric kernel and avoids zero-padding transients.
    """
    x = np.asarray(x, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    taps = coeffs.shape[0]
    pad = (taps - 1) // 2
    if x.shape[-1] < taps:
        raise SignalTooShortError(
            f"series of length {x.shape[-1]} is shorter than the {taps}-tap filter"
        )
    padded = np.pad(x, [(0, 0)] * (x.ndim - 1) + [(pad, pad)], mode="reflect")
    windows = np.lib.stride_tricks.sliding_window_view(padded, taps, axis=-1)
    return windows @ coeffs[::-1]


def analytic_signal(x: np.ndarray) -> np.ndarray:
    """Analytic signal along the last axis via the one-sided FFT multiplier.

    Bin 0 (and the Nyquist bin for even lengths) keep weight 1, positive
    frequencies get 2, negative frequencies 0.  The real part reproduces the
    input to rounding error; the imaginary part is its Hilbert transform.
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    if n < 4:
        raise SignalTooShortError(f"analytic signal needs >= 4 samples, got {n}")
    spectrum = np.fft.fft(x, axis=-1)
    weight = np.zeros(n)
    weight[0] = 1.0
    if n % 2 == 0:
        weight[n // 2] = 1.0
        weight[1 : n // 2] = 2.0
    else:
        weight[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(spectrum * weight, axis=-1)


def interior_slice(n: int, fraction: float = INTERIOR_FRACTION) -> slice:
    """Central span holding `fraction` of n samples (edge transients excluded)."""
    margin = int(round(n * (1.0 - fraction) / 2.0))
    return slice(margin, n - margin)


@dataclass(frozen=True)
class FeatureVector:
    """Per-trial features: (mean envelope, phase resultant x, y) per channel."""

    values: np.ndarray
    subject_id: int
    direction: Direction | None = None

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=np.float64)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_channels(self) -> int:
        return self.values.shape[0] // FEATURES_PER_CHANNEL

    def validate(self) -> None:
        v = self.values
        if v.ndim != 1 or v.shape[0] % FEATURES_PER_CHANNEL != 0:
            raise ValueError("feature vector length must be a multiple of 3")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite feature values")
        per = v.reshape(-1, FEATURES_PER_CHANNEL)
        if np.any(per[:, 0] < 0.0):
            raise ValueError("mean envelope must be >= 0")
        if np.any(per[:, 1] ** 2 + per[:, 2] ** 2 > 1.0 + 1e-9):
            raise ValueError("phase resultant length exceeds 1")


def extract_features(trial: Trial, spec: FilterSpec) -> FeatureVector:
    """Filter, take the analytic signal, and summarize each channel.

    A channel whose filtered signal is identically zero has no defined phase;
    by convention it contributes (0, 0, 0).
    """
    coeffs = design_bandpass(spec)
    banded = filter_signal(trial.samples, coeffs)
    analytic = analytic_signal(banded)
    core = analytic[:, interior_slice(trial.n_samples)]
    envelope = np.abs(core)

    values = np.zeros(trial.n_channels * FEATURES_PER_CHANNEL)
    for c in range(trial.n_channels):
        env_c = envelope[c]
        values[3 * c] = env_c.mean()
        if np.all(env_c == 0.0):
            continue
        resultant = np.exp(1j * np.angle(core[c])).mean()
        values[3 * c + 1] = resultant.real
        values[3 * c + 2] = resultant.imag

    fv = FeatureVector(
        values=values, subject_id=trial.subject_id, direction=trial.label.direction
    )
    fv.validate()
    return fv


def dataset_features(ds: Dataset, spec: FilterSpec) -> list[FeatureVector]:
    """Features for every trial, in dataset order."""
    return [extract_features(t, spec) for t in ds.trials]


def feature_header(n_channels: int) -> list[str]:
    cols = ["subject_id", "direction"]
    cols += [f"f_{i}" for i in range(FEATURES_PER_CHANNEL * n_channels)]
    return cols


def write_features_csv(features, n_channels: int, path, config_hash: str = "") -> None:
    """CSV export: one row per trial, full-precision floats.

    A leading '#' comment line carries the generating config hash so the
    file is traceable; readers must skip comment lines.
    """
    with open(path, "w", newline="") as fh:
        if config_hash:
            fh.write(f"# config_hash={config_hash}\n")
        writer = csv.writer(fh)
        writer.writerow(feature_header(n_channels))
        for fv in features:
            direction = "" if fv.direction is None else int(fv.direction)
            writer.writerow(
                [fv.subject_id, direction] + [repr(float(v)) for v in fv.values]
            )


def read_features_csv(path) -> list[FeatureVector]:
    """Inverse of write_features_csv (comment lines and header skipped)."""
    features = []
    with open(path, newline="") as fh:
        rows = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(rows, None)
        if header is None or header[:2] != ["subject_id", "direction"]:
            raise ValueError(f"{path}: missing feature header")
        for row in rows:
            direction = None if row[1] == "" else Direction(int(row[1]))
            features.append(
                FeatureVector(
                    values=np.array([float(v) for v in row[2:]]),
                    subject_id=int(row[0]),
                    direction=direction,
                )
            )
    return features
