"""Angle-to-direction translation.

Gaze events are recorded as a saccade vector (angle, amplitude) in screen
coordinates: angle 0 points right, +pi/2 points down (y grows downward),
+/-pi points left.  The binary task collapses this to left/right by the
half-plane the vector lies in:

    right  iff  |angle| <= pi/2
    left   iff  pi/2 < |angle| <= pi

Ties at exactly +/-pi/2 (purely vertical saccades) land on the closed
boundary of the right half-plane and are labeled right.  The comparison is
exact; no epsilon is applied.  Angles outside [-pi, pi] are a recording
error, not a labeling choice, and raise.
"""
from __future__ import annotations

from dataclasses import replace
from math import pi

from gazebench.datamodel import Dataset, DatasetInvariantError, Direction

HALF_PLANE_BOUNDARY = pi / 2


def angle_to_direction(angle: float) -> Direction:
    """Map a saccade angle in radians to its binary direction.

    Pure and total on [-pi, pi]; raises DatasetInvariantError outside it.
    """
    a = abs(angle)
    if not a <= pi:  # also rejects NaN
        raise DatasetInvariantError(f"angle {angle!r} outside [-pi, pi]")
    return Direction.RIGHT if a <= HALF_PLANE_BOUNDARY else Direction.LEFT


def relabel_dataset(ds: Dataset) -> Dataset:
    """Return a copy of ``ds`` with every trial's direction populated.

    Already-translated trials are re-derived from the angle, so the output
    is consistent even if stale directions were attached upstream.
    """
    trials = []
    for t in ds.trials:
        label = replace(t.label, direction=angle_to_direction(t.label.angle))
        trials.append(replace(t, label=label))
    return ds.with_trials(trials)
