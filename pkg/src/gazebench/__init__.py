"""gazebench: EEG-based left/right gaze classification under paradigm shift.

The package generates synthetic multi-channel EEG with a gaze-locked alpha
band signature, extracts band-limited envelope and phase features, trains a
panel of from-scratch classifiers, and measures how accuracy degrades when
the training and evaluation gaze paradigms differ.
"""

from gazebench.datamodel import (
    BadMagicError,
    Dataset,
    DatasetError,
    DatasetFormatError,
    DatasetInvariantError,
    Direction,
    GazeLabel,
    Manifest,
    Paradigm,
    Trial,
    TruncatedFileError,
    UnsupportedVersionError,
    read_dataset,
    write_dataset,
)
from gazebench.labels import angle_to_direction, relabel_dataset

__version__ = "0.1.0"

__all__ = [
    "BadMagicError",
    "Dataset",
    "DatasetError",
    "DatasetFormatError",
    "DatasetInvariantError",
    "Direction",
    "GazeLabel",
    "Manifest",
    "Paradigm",
    "Trial",
    "TruncatedFileError",
    "UnsupportedVersionError",
    "angle_to_direction",
    "read_dataset",
    "relabel_dataset",
    "write_dataset",
    "__version__",
]
