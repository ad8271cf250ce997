"""Two-stream (MFCC + spectrogram) audio affect recognition toolkit."""

from ._core import (
    EmoAudioNetError,
    __version__,
    add_noise,
    bin_labels,
    compute_metrics,
    hamming_window,
    load_wav,
    mfcc_features,
    pitch_shift,
    predict,
    resample,
    save_wav,
    spectrogram_image,
    stream_feature_dims,
)

__all__ = [
    "EmoAudioNetError",
    "__version__",
    "add_noise",
    "bin_labels",
    "compute_metrics",
    "hamming_window",
    "load_wav",
    "mfcc_features",
    "pitch_shift",
    "predict",
    "resample",
    "save_wav",
    "spectrogram_image",
    "stream_feature_dims",
]
