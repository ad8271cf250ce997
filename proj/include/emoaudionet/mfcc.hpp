#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emoaudionet/audio.hpp"

namespace emoaudionet::mfcc {

struct MfccConfig {
    double window_seconds = 2.5;
    double hop_seconds = 0.5;
    std::size_t mel_filters = 24;
    std::size_t cepstral_per_frame = 24;  // after DCT truncation
    std::size_t output_dim = 177;
};

/// Fixed-length cepstral vector feeding the 1D stream.
struct MfccInput {
    std::vector<double> values;  // exactly config.output_dim entries
    std::string clip_id;
};

/// mel(f) = 2595 * log10(1 + f/700)
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// One-sided |DFT|^2 of an already-windowed frame, zero-padded to the next
/// power of two. Returns floor(n/2)+1 bins for padded length n.
std::vector<double> power_spectrum(const audio::Frame& frame);

/// Triangular mel filterbank with centers equally spaced in mel between 0 and
/// Nyquist. Rows are [n_filters x fft_bins], where fft_bins is the one-sided
/// bin count floor(n/2)+1 of an FFT of length n.
std::vector<std::vector<double>> build_mel_filterbank(std::size_t n_filters,
                                                      std::size_t fft_bins,
                                                      std::uint32_t sample_rate);

/// power spectrum -> mel energies -> log(.+1e-10) -> orthonormal DCT-II ->
/// first cepstral_per_frame coefficients. The frame must be windowed already.
std::vector<double> compute_mfcc_frame(const audio::Frame& frame, const MfccConfig& config,
                                       const std::vector<std::vector<double>>& filterbank);

/// Full per-clip pipeline: Hamming-windowed frames, per-frame cepstra
/// concatenated in time order, truncated or zero-padded to output_dim.
MfccInput assemble_mfcc_input(const audio::AudioClip& clip, const MfccConfig& config);

}  // namespace emoaudionet::mfcc
