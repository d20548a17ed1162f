"""Band-pass design, analytic signal, and feature extraction."""
import math

import numpy as np
import pytest

from gazebench import dsp
from gazebench import datamodel as dm
from gazebench import synth


def _interior_rms(x, fraction=0.8):
    sl = dsp.interior_slice(len(x), fraction)
    return float(np.sqrt(np.mean(np.square(x[sl]))))


def _tone(freq, fs, seconds=2.0, phase=0.0):
    t = np.arange(int(round(fs * seconds))) / fs
    return np.cos(2 * np.pi * freq * t + phase)


# -------------------------------------------------------------- filter design

@pytest.mark.parametrize("fs", [250.0, 500.0, 1000.0])
def test_bandpass_response(fs):
    spec = dsp.FilterSpec.for_rate(fs)
    coeffs = dsp.design_bandpass(spec)
    assert len(coeffs) % 2 == 1
    assert abs(coeffs.sum()) < 1e-3  # DC rejection

    for freq, db_lo, db_hi in [(10.5, -1.0, 1.0), (2.0, None, -30.0),
                               (26.0, None, -30.0)]:
        x = _tone(freq, fs)
        y = dsp.filter_signal(x, coeffs)
        gain_db = 20 * math.log10(_interior_rms(y) / _interior_rms(x))
        if db_lo is not None:
            assert db_lo <= gain_db <= db_hi, (freq, gain_db)
        else:
            assert gain_db <= db_hi, (freq, gain_db)


def test_filter_zero_phase():
    # symmetric FIR applied symmetrically: a centered pulse stays centered
    spec = dsp.FilterSpec(fs=500.0)
    coeffs = dsp.design_bandpass(spec)
    x = np.zeros(1001)
    x[500] = 1.0
    y = dsp.filter_signal(x, coeffs)
    assert int(np.argmax(np.abs(y))) == 500
    assert y.shape == x.shape


def test_filter_linearity_and_homogeneity(rng):
    spec = dsp.FilterSpec(fs=500.0)
    coeffs = dsp.design_bandpass(spec)
    x1, x2 = rng.normal(size=600), rng.normal(size=600)
    lhs = dsp.filter_signal(3.0 * x1 - 2.0 * x2, coeffs)
    rhs = 3.0 * dsp.filter_signal(x1, coeffs) - 2.0 * dsp.filter_signal(x2, coeffs)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_filter_2d_matches_rowwise(rng):
    spec = dsp.FilterSpec(fs=500.0)
    coeffs = dsp.design_bandpass(spec)
    X = rng.normal(size=(4, 500))
    Y = dsp.filter_signal(X, coeffs)
    for c in range(4):
        assert np.allclose(Y[c], dsp.filter_signal(X[c], coeffs), atol=0)


def test_taps_scale_with_rate():
    assert dsp.FilterSpec.for_rate(500.0).taps == 257
    spec250 = dsp.FilterSpec.for_rate(250.0)
    spec1k = dsp.FilterSpec.for_rate(1000.0)
    assert spec250.taps % 2 == 1 and spec1k.taps % 2 == 1
    assert spec250.taps < 257 < spec1k.taps


def test_filter_spec_validation():
    with pytest.raises(ValueError):
        dsp.FilterSpec(fs=500.0, taps=256).validate()  # even
    with pytest.raises(ValueError):
        dsp.FilterSpec(fs=500.0, low_hz=13.0, high_hz=8.0).validate()
    with pytest.raises(ValueError):
        dsp.FilterSpec(fs=20.0).validate()  # band above Nyquist


# ------------------------------------------------------------- analytic signal

def test_analytic_signal_oracle():
    fs, f = 500.0, 10.0
    x = _tone(f, fs, seconds=1.0)
    z = dsp.analytic_signal(x)
    assert np.allclose(z.real, x, rtol=0, atol=1e-10 * np.abs(x).max())

    sl = dsp.interior_slice(len(x), 0.8)
    env = np.abs(z)[sl]
    assert np.all(np.abs(env - 1.0) <= 0.01)

    phase = np.unwrap(np.angle(z))[sl]
    incr = np.diff(phase)
    expected = 2 * np.pi * f / fs
    assert np.all(np.abs(incr - expected) <= 0.01 * expected)


def test_analytic_signal_quadrature():
    # imaginary part of a cosine's analytic signal is the sine
    fs = 500.0
    t = np.arange(1000) / fs
    z = dsp.analytic_signal(np.cos(2 * np.pi * 10 * t))
    sl = dsp.interior_slice(len(t), 0.8)
    assert np.allclose(z.imag[sl], np.sin(2 * np.pi * 10 * t)[sl], atol=5e-3)


def test_analytic_signal_parseval(rng):
    # odd length: no Nyquist bin, so doubling the positive frequencies
    # exactly doubles the power of a zero-mean signal
    x = rng.normal(size=511)
    x = x - x.mean()
    z = dsp.analytic_signal(x)
    assert np.sum(np.abs(z) ** 2) == pytest.approx(2 * np.sum(x ** 2), rel=1e-9)


def test_analytic_signal_too_short():
    with pytest.raises(dsp.SignalTooShortError):
        dsp.analytic_signal(np.zeros(3))


# ------------------------------------------------------------------- features

def test_interior_slice_margins():
    assert dsp.interior_slice(500, 0.8) == slice(50, 450)
    assert dsp.interior_slice(10, 0.8) == slice(1, 9)
    assert dsp.interior_slice(5, 1.0) == slice(0, 5)


def test_feature_layout_and_phase_identity(small_pa):
    from gazebench.labels import relabel_dataset
    ds = relabel_dataset(small_pa)
    spec = dsp.FilterSpec.for_rate(ds.manifest.fs)
    feats = dsp.dataset_features(ds, spec)
    assert len(feats) == len(ds.trials)
    C = ds.manifest.n_channels
    for fv in feats[:10]:
        fv.validate()
        assert fv.values.shape == (3 * C,)
        trip = fv.values.reshape(C, 3)
        env, re, im = trip[:, 0], trip[:, 1], trip[:, 2]
        assert np.all(env >= 0)
        assert np.all(re ** 2 + im ** 2 <= 1.0 + 1e-9)


def test_all_zero_channel_features():
    cfg = synth.GeneratorConfig(n_subjects=1, trials_per_subject=1,
                                n_channels=2, master_seed=0)
    label = dm.GazeLabel(angle=0.0, amplitude=300.0,
                         direction=dm.Direction.RIGHT)
    samples = np.zeros((2, 500), dtype=np.float32)
    trial = dm.Trial(subject_id=0, paradigm=dm.Paradigm.PRO_ANTISACCADE,
                     label=label, samples=samples, fs=500.0)
    spec = dsp.FilterSpec(fs=500.0)
    fv = dsp.extract_features(trial, spec)
    assert np.array_equal(fv.values, np.zeros(6))


def test_feature_header():
    assert dsp.feature_header(2) == [
        "subject_id", "direction", "f_0", "f_1", "f_2", "f_3", "f_4", "f_5"]


def test_features_csv_round_trip(tmp_path, small_pa):
    from gazebench.labels import relabel_dataset
    ds = relabel_dataset(small_pa)
    spec = dsp.FilterSpec.for_rate(ds.manifest.fs)
    feats = dsp.dataset_features(ds, spec)
    path = tmp_path / "f.csv"
    dsp.write_features_csv(feats, ds.manifest.n_channels, path,
                           config_hash="beef")
    back = dsp.read_features_csv(path)
    assert len(back) == len(feats)
    for a, b in zip(feats, back):
        assert a.subject_id == b.subject_id
        assert a.direction == b.direction
        assert np.array_equal(a.values, b.values)  # repr round-trips exactly
