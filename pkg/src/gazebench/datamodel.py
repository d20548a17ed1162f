"""Core domain types and the binary ``EEGT`` dataset container.

A dataset is a flat list of gaze trials (multi-channel EEG window plus the
gaze vector that provoked it) with a manifest describing the shared recording
parameters.  The on-disk format is a single little-endian binary file:

    magic        4 bytes  b"EEGT"
    version      u16      schema version (currently 1)
    fs           f64      sampling rate, Hz
    n_channels   u16
    paradigm     u8       0 = pro-antisaccade, 1 = large grid
    n_trials     u32
    per trial:
        subject_id  u32
        angle       f64    radians, y-down screen convention
        amplitude   f64    pixels
        n_samples   u32
        samples     n_channels * n_samples f32, channel-major
    manifest     u32 byte length + UTF-8 JSON (provenance; optional on read)

Samples round-trip bit-exactly (f32 payload is copied verbatim).  The binary
direction label is *not* stored: it is derived data, produced from the angle
by the translation step in :mod:`gazebench.labels`.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field, replace
from enum import IntEnum
from math import pi

import numpy as np

MAGIC = b"EEGT"
SCHEMA_VERSION = 1

_HEADER = struct.Struct("<dHBI")   # fs, n_channels, paradigm, n_trials
_RECORD = struct.Struct("<IddI")   # subject_id, angle, amplitude, n_samples
_MANIFEST_LEN = struct.Struct("<I")

# Minimum Nyquist headroom: band upper edge is 13 Hz, so fs must exceed 26 Hz.
MIN_FS = 26.0


class DatasetError(Exception):
    """Base class for dataset validation and format errors."""


class DatasetInvariantError(DatasetError):
    """A domain invariant is violated (refused on write, rejected on read)."""


class DatasetFormatError(DatasetError):
    """The byte stream is not a decodable EEGT file."""


class BadMagicError(DatasetFormatError):
    pass


class UnsupportedVersionError(DatasetFormatError):
    pass


class TruncatedFileError(DatasetFormatError):
    pass


class Direction(IntEnum):
    """Binary gaze direction. The integer encoding is fixed: left=1, right=0."""

    RIGHT = 0
    LEFT = 1


class Paradigm(IntEnum):
    PRO_ANTISACCADE = 0
    LARGE_GRID = 1

    @property
    def label(self) -> str:
        return "pro_antisaccade" if self is Paradigm.PRO_ANTISACCADE else "large_grid"


@dataclass(frozen=True)
class GazeLabel:
    """A gaze event as (angle, amplitude) plus its derived binary direction.

    ``angle`` is in radians, restricted to [-pi, pi], measured in screen
    coordinates where 0 is right and +pi/2 is down.  ``direction`` is None
    until the label has been translated (see :mod:`gazebench.labels`).
    """

    angle: float
    amplitude: float
    direction: Direction | None = None

    def validate(self) -> None:
        if not abs(self.angle) <= pi:
            raise DatasetInvariantError(f"angle {self.angle!r} outside [-pi, pi]")
        if not self.amplitude >= 0.0:
            raise DatasetInvariantError(f"amplitude {self.amplitude!r} must be >= 0")


@dataclass(frozen=True, eq=False)
class Trial:
    """One gaze event: an EEG window of shape (n_channels, n_samples) plus metadata."""

    subject_id: int
    paradigm: Paradigm
    label: GazeLabel
    samples: np.ndarray
    fs: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=np.float32)
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    def validate(self) -> None:
        self.label.validate()
        if self.subject_id < 0 or self.subject_id > 0xFFFFFFFF:
            raise DatasetInvariantError(f"subject_id {self.subject_id} not a u32")
        if self.samples.ndim != 2:
            raise DatasetInvariantError("samples must be a channels x time matrix")
        if self.n_channels < 1:
            raise DatasetInvariantError("trial needs at least one channel")
        if self.n_samples < 2:
            raise DatasetInvariantError("trial needs at least two samples")
        if not self.fs > MIN_FS:
            raise DatasetInvariantError(f"fs {self.fs} must exceed {MIN_FS} Hz (Nyquist)")

    def __eq__(self, other):
        if not isinstance(other, Trial):
            return NotImplemented
        return (
            self.subject_id == other.subject_id
            and self.paradigm == other.paradigm
            and self.label == other.label
            and self.fs == other.fs
            and self.samples.shape == other.samples.shape
            and self.samples.tobytes() == other.samples.tobytes()
        )


@dataclass(frozen=True)
class Manifest:
    schema_version: int
    fs: float
    n_channels: int
    paradigm: Paradigm
    config_hash: str = ""

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": self.schema_version,
                "fs": self.fs,
                "n_channels": self.n_channels,
                "paradigm": self.paradigm.label,
                "config_hash": self.config_hash,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        raw = json.loads(text)
        paradigm = {p.label: p for p in Paradigm}[raw["paradigm"]]
        return cls(
            schema_version=int(raw["schema_version"]),
            fs=float(raw["fs"]),
            n_channels=int(raw["n_channels"]),
            paradigm=paradigm,
            config_hash=str(raw.get("config_hash", "")),
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """An ordered collection of trials sharing one recording configuration."""

    manifest: Manifest
    trials: tuple[Trial, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "trials", tuple(self.trials))

    @property
    def subjects(self) -> tuple[int, ...]:
        return tuple(sorted({t.subject_id for t in self.trials}))

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    def validate(self) -> None:
        for t in self.trials:
            t.validate()
            if t.fs != self.manifest.fs:
                raise DatasetInvariantError("trial fs differs from manifest fs")
            if t.n_channels != self.manifest.n_channels:
                raise DatasetInvariantError("trial channel count differs from manifest")
            if t.paradigm != self.manifest.paradigm:
                raise DatasetInvariantError("trial paradigm differs from manifest")

    def with_trials(self, trials) -> "Dataset":
        return replace(self, trials=tuple(trials))

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.manifest == other.manifest and self.trials == other.trials


def write_dataset(ds: Dataset, path) -> None:
    """Serialize ``ds`` to ``path`` in the EEGT binary format.

    Refuses to write a dataset that violates its invariants.
    """
    ds.validate()
    m = ds.manifest
    chunks = [MAGIC, struct.pack("<H", SCHEMA_VERSION)]
    chunks.append(_HEADER.pack(m.fs, m.n_channels, int(m.paradigm), len(ds.trials)))
    for t in ds.trials:
        chunks.append(_RECORD.pack(t.subject_id, t.label.angle, t.label.amplitude, t.n_samples))
        chunks.append(t.samples.astype("<f4", copy=False).tobytes())
    blob = m.to_json().encode("utf-8")
    chunks.append(_MANIFEST_LEN.pack(len(blob)))
    chunks.append(blob)
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def read_dataset(path) -> Dataset:
    """Read an EEGT file back into a :class:`Dataset` (inverse of write_dataset).

    Directions are left untranslated (None); run the label translation step to
    populate them.  Raises a distinct error per failure mode: BadMagicError,
    UnsupportedVersionError, TruncatedFileError, DatasetInvariantError.
    """
    with open(path, "rb") as fh:
        buf = fh.read()
    if len(buf) < len(MAGIC) + 2:
        raise TruncatedFileError(f"{path}: too short for magic and version")
    if buf[: len(MAGIC)] != MAGIC:
        raise BadMagicError(f"{path}: bad magic {buf[:4]!r}")
    (version,) = struct.unpack_from("<H", buf, len(MAGIC))
    if version != SCHEMA_VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported schema version {version}")
    off = len(MAGIC) + 2
    if len(buf) < off + _HEADER.size:
        raise TruncatedFileError(f"{path}: truncated header")
    fs, n_channels, paradigm_code, n_trials = _HEADER.unpack_from(buf, off)
    off += _HEADER.size
    try:
        paradigm = Paradigm(paradigm_code)
    except ValueError:
        raise DatasetInvariantError(f"{path}: unknown paradigm code {paradigm_code}")

    trials = []
    for i in range(n_trials):
        if len(buf) < off + _RECORD.size:
            raise TruncatedFileError(f"{path}: truncated at trial {i} record header")
        subject_id, angle, amplitude, n_samples = _RECORD.unpack_from(buf, off)
        off += _RECORD.size
        nbytes = 4 * n_channels * n_samples
        if len(buf) < off + nbytes:
            raise TruncatedFileError(f"{path}: truncated inside trial {i} samples")
        samples = np.frombuffer(buf, dtype="<f4", count=n_channels * n_samples, offset=off)
        samples = samples.reshape(n_channels, n_samples).copy()
        off += nbytes
        trials.append(
            Trial(
                subject_id=subject_id,
                paradigm=paradigm,
                label=GazeLabel(angle=angle, amplitude=amplitude),
                samples=samples,
                fs=fs,
            )
        )

    if off == len(buf):
        manifest = Manifest(SCHEMA_VERSION, fs, n_channels, paradigm)
    else:
        if len(buf) < off + _MANIFEST_LEN.size:
            raise TruncatedFileError(f"{path}: truncated manifest length")
        (blob_len,) = _MANIFEST_LEN.unpack_from(buf, off)
        off += _MANIFEST_LEN.size
        if len(buf) != off + blob_len:
            raise TruncatedFileError(
                f"{path}: manifest length {blob_len} does not match remaining bytes"
            )
        try:
            manifest = Manifest.from_json(buf[off:].decode("utf-8"))
        except (ValueError, KeyError, UnicodeDecodeError) as exc:
            raise DatasetFormatError(f"{path}: undecodable manifest: {exc}")

    ds = Dataset(manifest=manifest, trials=tuple(trials))
    try:
        ds.validate()
    except DatasetInvariantError as exc:
        raise DatasetInvariantError(f"{path}: {exc}")
    return ds


def expected_file_size(n_channels: int, samples_per_trial, manifest_bytes: int) -> int:
    """Exact file size implied by the header counts (used to detect truncation)."""
    core = len(MAGIC) + 2 + _HEADER.size
    for n_samples in samples_per_trial:
        core += _RECORD.size + 4 * n_channels * n_samples
    return core + _MANIFEST_LEN.size + manifest_bytes
