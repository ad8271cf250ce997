"""Smoke tests for the python bindings and the CLI binary."""

import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

import emoaudionet as ean


def make_sine(freq, rate=16000, seconds=1.0, amp=0.5):
    t = np.arange(int(rate * seconds)) / rate
    return amp * np.sin(2 * np.pi * freq * t)


def test_version():
    assert ean.__version__


def test_hamming_window():
    w = ean.hamming_window(3)
    assert w == pytest.approx([0.08, 1.0, 0.08])
    assert ean.hamming_window(1) == pytest.approx([1.0])


def test_wav_roundtrip(tmp_path):
    path = str(tmp_path / "tone.wav")
    samples = make_sine(440.0)
    ean.save_wav(path, samples, 16000)
    back, rate, clip_id = ean.load_wav(path)
    assert rate == 16000
    assert clip_id == "tone"
    assert np.max(np.abs(back - samples)) <= 1 / 32768


def test_feature_shapes():
    samples = make_sine(300.0, seconds=2.0)
    mfcc = ean.mfcc_features(samples, 16000)
    assert mfcc.shape == (177,)
    assert np.all(np.isfinite(mfcc))

    image = ean.spectrogram_image(samples, 16000)
    assert image.shape == (224, 224, 3)
    assert image.min() >= 0.0 and image.max() <= 1.0


def test_add_noise_determinism():
    samples = np.zeros(4000)
    a = ean.add_noise(samples, 16000, 0.03, seed=9)
    b = ean.add_noise(samples, 16000, 0.03, seed=9)
    assert np.array_equal(a, b)
    assert np.max(np.abs(a)) <= 0.03
    assert not np.array_equal(a, ean.add_noise(samples, 16000, 0.03, seed=10))


def test_pitch_shift_peak():
    samples = make_sine(440.0, seconds=2.0)
    shifted = ean.pitch_shift(samples, 16000, 2.0)
    assert len(shifted) == len(samples)
    spectrum = np.abs(np.fft.rfft(shifted))
    peak_hz = np.argmax(spectrum) * 16000 / len(shifted)
    expected = 440.0 * 2 ** (-2 / 12)
    assert abs(peak_hz - expected) <= 0.02 * expected


def test_stream_feature_dims():
    assert ean.stream_feature_dims("dep-bin", 128) == (1152, 2816)
    assert ean.stream_feature_dims("arousal", 8) == (72, 176)


def test_bin_labels():
    assert ean.bin_labels([-1.0, 0.0, 1.0], "arousal") == [0, 5, 9]
    with pytest.raises(ean.EmoAudioNetError):
        ean.bin_labels([2.0], "arousal")


def test_compute_metrics_matches_published_numbers():
    predicted = [0] * 1441 + [0] * 354 + [1] * 283 + [1] * 303
    actual = [0] * 1441 + [1] * 354 + [0] * 283 + [1] * 303
    report = ean.compute_metrics(predicted, actual, "dep-bin")
    assert report["accuracy"] * 100 == pytest.approx(73.25, abs=0.01)
    assert report["per_class"][1]["precision"] * 100 == pytest.approx(51.71, abs=0.01)
    assert report["per_class"][1]["recall"] * 100 == pytest.approx(46.12, abs=0.01)
    assert report["confusion"] == [[1441, 354], [283, 303]]


@pytest.fixture(scope="module")
def cli():
    path = os.environ.get("EMOAUDIONET_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("EMOAUDIONET_CLI not set")
    return path


def test_cli_pipeline(cli, tmp_path):
    corpus = tmp_path / "corpus"
    env = dict(os.environ, EMOAUDIONET_CACHE_DIR=str(tmp_path / "cache"))

    def run(*args):
        return subprocess.run([cli, *args], env=env, capture_output=True, text=True)

    assert run("synth", "--classes", "2", "--per-class", "3", "--seed", "5",
               "--out", str(corpus), "--duration", "1.0").returncode == 0

    png_dir = tmp_path / "png"
    assert run("extract", "--kind", "spectro", "--corpus", str(corpus / "manifest.csv"),
               "--out", str(tmp_path / "feat"), "--png", str(png_dir)).returncode == 0
    from PIL import Image

    with Image.open(png_dir / "class0_clip0.png") as img:
        assert img.size == (224, 224)
        assert img.mode == "RGB"

    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "learning_rate": 1e-3, "batch_size": 6, "max_epochs": 2,
        "early_stop_patience": 5, "seed": 3, "width": 2,
    }))
    ckpt = tmp_path / "model.eanc"
    assert run("train", "--task", "dep-bin", "--corpus", str(corpus / "manifest.csv"),
               "--config", str(config), "--out", str(ckpt)).returncode == 0

    result = run("predict", "--ckpt", str(ckpt), "--wav", str(corpus / "class0_clip0.wav"))
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["task"] == "dep-bin"
    assert len(payload["probs"]) == 2
    assert math.isclose(sum(payload["probs"]), 1.0, abs_tol=1e-9)

    # python-side prediction agrees with the CLI
    py_payload = ean.predict(str(ckpt), str(corpus / "class0_clip0.wav"))
    assert py_payload["predicted_class"] == payload["predicted_class"]
    assert np.allclose(py_payload["probs"], payload["probs"])
